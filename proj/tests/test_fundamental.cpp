#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "bsc/fundamental.hpp"
#include "bsc/special_kernels.hpp"
#include "oracles.hpp"

using namespace bsc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("fourier_E rotation invariance and slot symmetry") {
  TruncatedKernel k2(2, 1.0);
  FrequencyTuple a{{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}}};
  FrequencyTuple b{{{0.0, 0.0, 1.0}, {2.0 / std::sqrt(2.0), 2.0 / std::sqrt(2.0), 0.0}}};
  CHECK(fourier_E(k2, a).real() == doctest::Approx(fourier_E(k2, b).real()).epsilon(1e-14));

  TruncatedKernel k3(3, 1.0);
  FrequencyTuple c{{{1.0, 0.2, 0.0}, {0.0, 1.7, 0.3}, {0.5, 0.5, 0.5}}};
  FrequencyTuple d{{{0.0, 1.7, 0.3}, {1.0, 0.2, 0.0}, {0.5, 0.5, 0.5}}};
  CHECK(fourier_E(k3, c).real() == doctest::Approx(fourier_E(k3, d).real()).epsilon(1e-12));
}

TEST_CASE("fourier_E homogeneity in the cutoff radius") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n_order : {2, 3}) {
    for (double R : {0.5, 1.0, 2.0}) {
      TruncatedKernel kR(n_order, R);
      TruncatedKernel k1(n_order, 1.0);
      FrequencyTuple xi, xiR;
      for (int j = 0; j < n_order; ++j) {
        Vec3 v = {u(rng), u(rng), u(rng)};
        xi.xi.push_back(v);
        xiR.xi.push_back({R * v[0], R * v[1], R * v[2]});
      }
      const double lhs = fourier_E(kR, xi).real();
      const double rhs = std::pow(R, 2.0 * n_order - 2.0) * fourier_E(k1, xiR).real();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
  // the N=2, R=2 vs R=1 example at doubled frequency, 1e-10
  TruncatedKernel k2a(2, 2.0), k2b(2, 1.0);
  FrequencyTuple xi{{{0.3, -0.4, 1.0}, {0.9, 0.1, -0.2}}};
  FrequencyTuple xi2{{{0.6, -0.8, 2.0}, {1.8, 0.2, -0.4}}};
  CHECK(fourier_E(k2a, xi).real() ==
        doctest::Approx(4.0 * fourier_E(k2b, xi2).real()).epsilon(1e-10));
}

TEST_CASE("pv_product converges to one") {
  const std::vector<double> sigmas = {1e-2, 1e-3, 1e-4};
  SUBCASE("N = 2") {
    auto seq = pv_product(2, {1.0, 2.0}, sigmas);
    CHECK(std::abs(seq.back() - 1.0) < 1e-3);
    // error decreases monotonically in sigma
    CHECK(std::abs(seq[0] - 1.0) > std::abs(seq[1] - 1.0));
    CHECK(std::abs(seq[1] - 1.0) > std::abs(seq[2] - 1.0));
  }
  SUBCASE("N = 3") {
    auto seq = pv_product(3, {1.0, 2.0, 4.0}, sigmas);
    CHECK(std::abs(seq.back() - 1.0) < 1e-3);
  }
  SUBCASE("degenerate radii rejected") {
    CHECK_THROWS_AS(pv_product(2, {1.0, 1.0}, sigmas), DegenerateRadii);
  }
  SUBCASE("slope is finite and at least linear") {
    auto seq = pv_product(3, {0.7, 1.9, 3.1}, sigmas);
    const double e1 = std::abs(seq[0] - 1.0), e2 = std::abs(seq[2] - 1.0);
    const double slope = std::log(e1 / e2) / std::log(100.0);
    CHECK(std::isfinite(slope));
    CHECK(slope >= 1.0);
  }
}

TEST_CASE("recursion check pairs agree in the regularized limit") {
  auto p3 = recursion_check(3, {1.0, 2.0, 4.0}, 1e-4);
  CHECK(std::abs(p3.first - p3.second) < 1e-3 * std::abs(p3.second));
  auto p4 = recursion_check(4, {1.0, 2.0, 3.0, 5.0}, 1e-4);
  CHECK(std::abs(p4.first - p4.second) < 1e-3 * std::abs(p4.second));
  CHECK_THROWS_AS(recursion_check(3, {1.0, 2.0, 2.0}, 1e-4), DegenerateRadii);
}

TEST_CASE("e2 pairing: antisymmetry, cone support, Gaussian anchors") {
  QuadratureSpec q;
  SUBCASE("symmetric test function pairs to zero") {
    PairFunction g;
    g.eval = [](const Vec3& x, const Vec3& y) {
      const double nx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      const double ny = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
      return std::exp(-nx - ny);
    };
    g.radius = 6.0;
    g.angular_order = 5;
    CHECK(std::abs(e2_pair(g, q)) < 1e-8);
  }
  SUBCASE("antisymmetric part is what the pairing sees") {
    // E_2 is antisymmetric, so it kills the symmetric part of g and pairs
    // nontrivially with g(x,y) = (|x|^2-|y|^2) e^{-|x|^2-|y|^2}:
    // mean (s^2-t^2) e^{-s^2-t^2}, reduction int 2 t^3 e^{-2t^2} dt = 1/4.
    PairFunction g;
    g.eval = [](const Vec3& x, const Vec3& y) {
      const double nx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      const double ny = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
      return (nx - ny) * std::exp(-nx - ny);
    };
    g.radius = 6.0;
    g.angular_order = 5;
    CHECK(e2_pair(g, q) == doctest::Approx(0.25).epsilon(1e-6));
  }
  SUBCASE("cone-avoiding support gives an exact zero") {
    PairFunction g;
    g.eval = [](const Vec3& x, const Vec3& y) {
      const double nx = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      const double ny = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
      if (nx > 2.0 && nx < 3.0 && ny < 1.0) return 1.0;
      return 0.0;
    };
    g.radius = 5.0;
    g.angular_order = 4;
    CHECK(e2_pair(g, q) == 0.0);
  }
  SUBCASE("asymmetric Gaussian pair has the closed value 1/18") {
    // g = e^{-|x|^2 - 2|y|^2}: reduction gives int t e^{-3t^2}(1 - 2t^2) dt = 1/18
    PairFunction g;
    g.radial_mean = [](double s, double t) { return std::exp(-s * s - 2.0 * t * t); };
    g.radius = 7.0;
    const double val = e2_pair(g, q);
    CHECK(val == doctest::Approx(1.0 / 18.0).epsilon(1e-7));

    // same pairing through the generic evaluator path
    PairFunction ge;
    ge.eval = [](const Vec3& x, const Vec3& y) {
      const double nx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      const double ny = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
      return std::exp(-nx - 2.0 * ny);
    };
    ge.radius = 6.0;
    ge.angular_order = 5;
    CHECK(e2_pair(ge, q) == doctest::Approx(1.0 / 18.0).epsilon(1e-5));

    // independent sigma-regularized Fourier-side oracle
    auto p1 = [](double r) { return std::pow(kPi, 1.5) * std::exp(-r * r / 4.0); };
    auto p2 = [](double r) {
      return std::pow(kPi / 2.0, 1.5) * std::exp(-r * r / 8.0);
    };
    const double orc = oracle::e2_fourier_pairing(p1, p2, 18.0);
    CHECK(val == doctest::Approx(orc).epsilon(1e-3));
  }
}

TEST_CASE("kernel table round trip and interpolation") {
  QuadratureSpec q;
  KernelTable t = KernelTable::build(2, 3.0, 0.05, q);
  SUBCASE("interpolation error against the exact evaluation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.2, 2.8);
    for (int i = 0; i < 30; ++i) {
      const double r1 = u(rng), r2 = u(rng);
      CHECK(std::abs(t.interpolate(RadialTuple{{r1, r2}}).real() - f2_exact(r1, r2)) < 2e-7);
    }
  }
  SUBCASE("range behavior") {
    CHECK_THROWS_AS(t.interpolate(RadialTuple{{3.5, 1.0}}), TableRangeExceeded);
    TruncatedKernel k(2, 1.0);
    k.table = &t;
    k.on_demand = false;
    CHECK_THROWS_AS(fourier_E_radii(k, RadialTuple{{3.5, 1.0}}), TableRangeExceeded);
    k.on_demand = true;
    CHECK(fourier_E_radii(k, RadialTuple{{3.5, 1.0}}).real() ==
          doctest::Approx(f2_exact(3.5, 1.0)).epsilon(1e-12));
  }
  SUBCASE("save, load, hash stability") {
    const std::string path = "ktab_test.ktab";
    t.save(path);
    KernelTable t2 = KernelTable::load(path);
    CHECK(t2.content_hash == t.content_hash);
    CHECK(t2.n == t.n);
    CHECK(t2.values == t.values);
    KernelTable t3 = KernelTable::build(2, 3.0, 0.05, q);
    CHECK(t3.content_hash == t.content_hash);  // deterministic rebuild
    std::remove(path.c_str());
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bsc/quadrature.hpp"
#include "bsc/special_kernels.hpp"
#include "oracles.hpp"

using namespace bsc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("phi basics") {
  CHECK(phi(1.0, kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(phi(0.7, -1.0) == 0.0);
  CHECK(phi(3.0, -1e-9) == 0.0);
  CHECK(phi(0.0, 2.5) == 2.5);
}

TEST_CASE("phi_conv_closed matches hand values and the quadrature oracle") {
  CHECK(phi_conv_closed({1.0, 2.0}, kPi / 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(phi_conv_closed({1.0, 2.0}, 0.0) == 0.0);
  CHECK(phi_conv_closed({2.0, 1.0}, kPi / 2) ==
        doctest::Approx(phi_conv_closed({1.0, 2.0}, kPi / 2)).epsilon(1e-14));
  // direct time-quadrature of int_0^{pi/2} sin(s) sin(2(pi/2 - s))/2 ds
  const double orc = oracle::conv_chain({1.0, 2.0}, kPi / 2);
  CHECK(phi_conv_closed({1.0, 2.0}, kPi / 2) == doctest::Approx(orc).epsilon(1e-9));
}

TEST_CASE("phi_conv_closed rejects clustered squares") {
  CHECK_THROWS_AS(phi_conv_closed({1.0, 1.0}, 1.0), NearDegenerateRadii);
  CHECK_THROWS_AS(phi_conv_closed({1.0, 1.0 + 1e-8}, 1.0), NearDegenerateRadii);
}

TEST_CASE("phi_conv_stable handles coincident radii") {
  // int_0^pi sin(s) sin(pi - s) ds = pi/2
  CHECK(phi_conv_stable({1.0, 1.0}, kPi) == doctest::Approx(kPi / 2).epsilon(1e-8));
  CHECK(phi_conv_stable({1.0, 1.0 + 1e-8}, kPi) == doctest::Approx(kPi / 2).epsilon(1e-6));
  const double exact = (std::sin(2.5) - 2.5 * std::cos(2.5)) / 2.0;
  CHECK(phi_conv_stable({1.0, 1.0}, 2.5) == doctest::Approx(exact).epsilon(1e-9));
  CHECK(phi_conv_stable({1.0, 2.0, 3.0}, 1.0) ==
        doctest::Approx(phi_conv_closed({1.0, 2.0, 3.0}, 1.0)).epsilon(1e-12));
  // zero cluster
  CHECK(phi_conv_stable({0.0, 0.0}, 1.0) ==
        doctest::Approx(oracle::conv_chain({0.0, 0.0}, 1.0)).epsilon(1e-7));
}

TEST_CASE("phi_conv_stable vanishing, permutation invariance, oracle equivalence") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.0, 2.5), ut(0.2, 10.0);
  for (int it = 0; it < 25; ++it) {
    const int n = 2 + static_cast<int>(rng() % 3);
    std::vector<double> r(n);
    for (auto& x : r) x = ur(rng);
    const double t = ut(rng);
    RadialTuple tup(r);
    CHECK(phi_conv_stable(tup, -t) == 0.0);
    std::vector<double> perm = r;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(phi_conv_stable(RadialTuple(perm), t) ==
          doctest::Approx(phi_conv_stable(tup, t)).epsilon(1e-12));
    const double orc = oracle::conv_chain(r, t);
    CHECK(std::abs(phi_conv_stable(tup, t) - orc) < 1e-6);
  }
}

TEST_CASE("laplace transform closed form") {
  QuadratureSpec q;
  SUBCASE("exact point F((1,0); 1) = 1/2") {
    const auto v = laplace_F_closed({1.0, 0.0}, ComplexShift({1.0, 0.0}));
    CHECK(v.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-15);
    // independent oracle: int_0^inf sin t e^{-t} dt = 1/2
    const double orc = oracle::simpson_integral(
        [](double t) { return std::sin(t) * std::exp(-t); }, 0.0, 40.0, 4000);
    CHECK(v.real() == doctest::Approx(orc).epsilon(1e-9));
  }
  SUBCASE("direct quadrature agrees") {
    const RadialTuple a{1.0, 2.0, 3.0};
    const ComplexShift s({0.5, 0.0});
    const auto closed = laplace_F_closed(a, s);
    const auto direct = laplace_F_direct(a, s, q);
    CHECK(std::abs(closed - direct) < 1e-8 * std::abs(closed) + 1e-12);
  }
  SUBCASE("sigma -> 0 limit") {
    const auto v = laplace_F_closed({1.0, 2.0}, ComplexShift({1e-6, 0.0}));
    CHECK(v.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-4));
  }
  SUBCASE("identity against quadrature on random triples (newton-type)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.0, 3.0), us(0.2, 1.5);
    for (int it = 0; it < 25; ++it) {
      const double a = ua(rng), b = ua(rng), s = us(rng);
      const double formula =
          (a * a - b * b + s * s) /
          (std::pow(a * a - b * b + s * s, 2) + 4.0 * b * b * s * s);
      const double t_max = 16.0 / s * std::log(10.0);
      auto f = [&](double t) {
        return oracle::phi_ref(a, t) * std::cos(t * b) * std::exp(-s * t);
      };
      const double quad = oracle::simpson_integral(f, 0.0, t_max, 40000);
      CHECK(std::abs(formula - quad) < 1e-7 * (1.0 + std::abs(formula)));
    }
  }
}

TEST_CASE("cutoff plateau, support, scaling") {
  CutoffSpec c5(5, 1.0);
  CHECK(chi(c5, 0.5) == 1.0);
  CHECK(chi(c5, -1.0) == 1.0);
  CHECK(chi(c5, 2.1) == 0.0);
  CHECK(chi(c5, 1.5) > 0.0);
  CHECK(chi(c5, 1.5) < 1.0);
  CutoffSpec c32(3, 2.0);
  CHECK(chi(c32, 1.9) == 1.0);
  CHECK(chi(c32, 4.0 + 1e-9) == 0.0);
  // scaling chi_{N,R}(t) = chi_N(t/R)
  CutoffSpec c31(3, 1.0);
  for (double t : {0.3, 1.1, 1.7, 1.95}) {
    CHECK(chi(c32, 2.0 * t) == doctest::Approx(chi(c31, t)).epsilon(1e-14));
  }
}

TEST_CASE("cutoff derivatives") {
  CutoffSpec c4(4, 1.0);
  for (double t : {-1.8, -0.4, 0.0, 0.7, 1.3, 1.9}) {
    const double v = chi_derivative(c4, 0, t);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(chi_derivative(c4, 1, 0.0) == 0.0);
  CHECK_THROWS_AS(chi_derivative(c4, 11, 0.5), DerivativeOrderTooHigh);

  // derivative of order 1 vs central difference of chi
  for (double t : {1.1, 1.5, 1.8}) {
    const double h = 1e-6;
    const double fd = (chi(c4, t + h) - chi(c4, t - h)) / (2.0 * h);
    CHECK(chi_derivative(c4, 1, t) == doctest::Approx(fd).epsilon(1e-6));
  }

  // sup_t |chi_4^{(3)}| <= (8*4)^3 on a dense sample
  double sup = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = -2.2 + 4.4 * i / 4000.0;
    sup = std::max(sup, std::abs(chi_derivative(c4, 3, t)));
  }
  CHECK(sup <= std::pow(32.0, 3));
  CHECK(sup > 0.0);
}

TEST_CASE("cutoff derivative bounds sample orders") {
  for (int n : {2, 4}) {
    CutoffSpec c(n, 1.0);
    for (int k = 0; k <= 2 * n + 2; ++k) {
      double sup = 0.0;
      for (int i = 0; i <= 1500; ++i) {
        const double t = 0.9 + 1.2 * i / 1500.0;
        sup = std::max(sup, std::abs(chi_derivative(c, k, t)));
      }
      CHECK(sup <= std::pow(8.0 * n, k) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("h_gamma") {
  CHECK(h_gamma(1.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(h_gamma(2.0, 3.0, 3.0) == doctest::Approx(1.0 / 16.0));
  // shift bound instance at (s, r, t) = (5, 1, 2), gamma = 1
  const double lhs = h_gamma(1.0, 5.0, 1.0 + 2.0);
  const double rhs = std::pow(1.0 + 2.0, 2) * h_gamma(1.0, 5.0, 1.0);
  CHECK(lhs <= rhs);
}

TEST_CASE("f_n_eval against a composite-Simpson oracle") {
  QuadratureSpec q;
  SUBCASE("N = 2 values, real integrand") {
    const auto v = f_n_eval(2, {1.0, 0.0}, q);
    CHECK(v.imag() == 0.0);
    CutoffSpec c2(2, 1.0);
    auto f = [&](double t) { return oracle::phi_ref(1.0, t) * chi(c2, t); };
    const double orc = -oracle::simpson_integral(f, 0.0, 2.0, 8192);
    CHECK(v.real() == doctest::Approx(orc).epsilon(1e-8));
  }
  SUBCASE("N = 3 sign and oracle") {
    const auto v = f_n_eval(3, {1.0, 2.0, 1.5}, q);
    CutoffSpec c3(3, 1.0);
    auto f = [&](double t) {
      return oracle::conv_chain({1.0, 2.0}, t, 512) * std::cos(1.5 * t) * chi(c3, t);
    };
    const double orc = oracle::simpson_integral(f, 0.0, 2.0, 1024);
    CHECK(v.real() == doctest::Approx(orc).epsilon(1e-6));
  }
  SUBCASE("kernel bound shape at gamma = 1") {
    const double g = 1.0;
    const auto v = f_n_eval(2, {3.0, 0.5}, q);
    const double envelope = std::pow(2.0, 5) * std::exp(2.0 * g) * h_gamma(g, 3.0, 0.5);
    // C fitted by the acceptance suite; here only the shape with C = 2
    CHECK(std::abs(v.real()) <= envelope * std::pow(2.0, 2));
  }
}

TEST_CASE("f2_exact equals the quadrature evaluation") {
  QuadratureSpec q;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.0, 30.0);
  for (int it = 0; it < 40; ++it) {
    const double r1 = ur(rng), r2 = ur(rng);
    const double ref = f_n_eval(2, {r1, r2}, q).real();
    CHECK(f2_exact(r1, r2) == doctest::Approx(ref).epsilon(5e-10));
  }
  CHECK(f2_exact(0.0, 1.3) == doctest::Approx(f_n_eval(2, {0.0, 1.3}, q).real()).epsilon(1e-10));
  CHECK(f2_exact(1e-9, 1.3) == doctest::Approx(f2_exact(0.0, 1.3)).epsilon(1e-6));
}

TEST_CASE("irwin-hall cdf and b-spline plumbing") {
  CHECK(irwin_hall_cdf(2, 1.0) == doctest::Approx(0.5));
  CHECK(irwin_hall_cdf(3, 0.0) == 0.0);
  CHECK(irwin_hall_cdf(3, 3.0) == 1.0);
  // partition of unity of the cardinal B-spline
  for (double x : {0.3, 1.7, 2.2}) {
    double s = 0.0;
    for (int i = -1; i <= 6; ++i) s += cardinal_bspline(4, x - i + 2.0);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}

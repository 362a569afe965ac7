#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bsc/backscatter.hpp"
#include "bsc/parallel.hpp"

using namespace bsc;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridPotential gaussian_preset(int m, double L) {
  PotentialSpec ps;
  ps.kind = "gaussian";
  ps.amplitude = 1.0;
  ps.width = 0.5;
  ps.support_radius = 2.0;
  return make_grid_potential(ps, m, L);
}

}  // namespace

TEST_CASE("b2_fourier structure") {
  const int m = 16;
  const double L = 4.0;
  GridPotential v = gaussian_preset(m, L);
  TruncatedKernel k(2, 4.0);

  SUBCASE("kernel radius precondition") {
    TruncatedKernel small(2, 1.0);
    CHECK_THROWS_AS(b2_fourier(v, small), ConfigError);
  }
  SUBCASE("quadratic homogeneity is exact") {
    BornTermResult b1 = b2_fourier(v, k);
    GridPotential v2 = v;
    scale(v2.field, cplx(2.0, 0.0));
    BornTermResult b2 = b2_fourier(v2, k);
    double err = 0.0;
    for (std::size_t i = 0; i < b1.field.a.size(); ++i)
      err = std::max(err, std::abs(b2.field.a[i] - 4.0 * b1.field.a[i]));
    CHECK(err < 1e-12 * linf_norm(b2.field));
  }
  SUBCASE("real output for real potential") {
    BornTermResult b = b2_fourier(v, k);
    double im = 0.0;
    for (const auto& z : b.field.a) im = std::max(im, std::abs(z.imag()));
    CHECK(im < 1e-8 * linf_norm(b.field));
  }
  SUBCASE("translation covariance on the lattice") {
    BornTermResult b0 = b2_fourier(v, k);
    // shift the potential by one lattice cell in x (periodic roll)
    GridPotential vs = v;
    vs.eval = nullptr;
    vs.radial_eval = nullptr;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int kk = 0; kk < m; ++kk)
          vs.field.at(i, j, kk) = v.field.at((i + m - 1) % m, j, kk);
    BornTermResult b1 = b2_fourier(vs, k);
    double err = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int kk = 0; kk < m; ++kk)
          err = std::max(err, std::abs(b1.field.at(i, j, kk) -
                                       b0.field.at((i + m - 1) % m, j, kk)));
    CHECK(err < 1e-8 * linf_norm(b0.field));
  }
  SUBCASE("polarization identity of the bilinear extension") {
    PotentialSpec ps;
    ps.kind = "bump";
    ps.support_radius = 1.5;
    ps.amplitude = 0.8;
    GridPotential w = make_grid_potential(ps, m, L);
    GridPotential sum = v;
    sum.eval = nullptr;
    sum.radial_eval = nullptr;
    for (std::size_t i = 0; i < sum.field.a.size(); ++i) sum.field.a[i] += w.field.a[i];
    BornTermResult bsum = b2_fourier_pair(sum, sum, k);
    BornTermResult bv = b2_fourier_pair(v, v, k);
    BornTermResult bw = b2_fourier_pair(w, w, k);
    BornTermResult bvw = b2_fourier_pair(v, w, k);
    BornTermResult bwv = b2_fourier_pair(w, v, k);
    double err = 0.0;
    for (std::size_t i = 0; i < bsum.field.a.size(); ++i) {
      const cplx cross = bsum.field.a[i] - bv.field.a[i] - bw.field.a[i];
      err = std::max(err, std::abs(cross - bvw.field.a[i] - bwv.field.a[i]));
    }
    CHECK(err < 1e-10 * linf_norm(bsum.field));
  }
  SUBCASE("lattice-coarseness guard") {
    PotentialSpec ps;
    ps.kind = "gaussian";
    ps.width = 0.05;  // unresolvable at this grid
    ps.support_radius = 1.0;
    GridPotential sharp = make_grid_potential(ps, 8, 1.0);
    TruncatedKernel ks(2, 2.0);
    CHECK_THROWS_AS(b2_fourier(sharp, ks), LatticeTooCoarse);
  }
}

TEST_CASE("b2 paths cross-validate") {
  set_thread_count(2);
  const int m = 20;
  const double L = 4.0;
  GridPotential v = gaussian_preset(m, L);
  TruncatedKernel k(2, 4.0);
  QuadratureSpec q;
  BornTermResult bf = b2_fourier(v, k);

  SUBCASE("physical path on the axis points") {
    std::vector<Vec3> pts = {{0.4, 0.0, 0.0}, {0.8, 0.0, 0.0}, {0.4, 0.4, 0.4}};
    std::vector<double> perr;
    auto pv = b2_physical(v, pts, q, 10, &perr);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      int ix = static_cast<int>(std::lround((pts[i][0] + L) / v.field.spacing()));
      int iy = static_cast<int>(std::lround((pts[i][1] + L) / v.field.spacing()));
      int iz = static_cast<int>(std::lround((pts[i][2] + L) / v.field.spacing()));
      const double fv = bf.field.at(ix, iy, iz).real();
      CHECK(std::abs(fv - pv[i]) <= bf.error_estimate + perr[i]);
      CHECK(std::abs(fv - pv[i]) < 0.05 * std::abs(pv[i]));
    }
  }
  SUBCASE("physical path basics") {
    GridPotential z = v;
    z.eval = [](const Vec3&) { return 0.0; };
    z.radial_eval = nullptr;
    auto pv = b2_physical(z, {{0.3, 0.0, 0.0}}, q, 8, nullptr);
    CHECK(pv[0] == 0.0);
    // quadratic amplitude scaling through the evaluator
    GridPotential v2 = v;
    auto base = v.radial_eval;
    v2.radial_eval = [base](double r) { return 3.0 * base(r); };
    auto a1 = b2_physical(v, {{0.5, 0.0, 0.0}}, q, 10, nullptr);
    auto a9 = b2_physical(v2, {{0.5, 0.0, 0.0}}, q, 10, nullptr);
    CHECK(a9[0] == doctest::Approx(9.0 * a1[0]).epsilon(1e-10));
  }
  SUBCASE("radial quadrature pipeline agrees with the physical oracle") {
    RadialPotential rp = make_radial_gaussian(1.0, 0.5, 2.0);
    std::vector<double> radii = {0.4, 0.8, 1.2};
    BornTermResult rq = b2_radial_quad(rp, k, radii, q);
    std::vector<Vec3> pts;
    for (double r : radii) pts.push_back({r, 0.0, 0.0});
    auto pv = b2_physical(v, pts, q, 12, nullptr);
    for (std::size_t i = 0; i < radii.size(); ++i)
      CHECK(rq.radial_values[i] == doctest::Approx(pv[i]).epsilon(2e-4));
  }
}

TEST_CASE("monte-carlo radial transform") {
  set_thread_count(2);
  QuadratureSpec q;
  RadialPotential rp = make_radial_gaussian(1.0, 0.5, 1.5);
  std::vector<double> radii = {0.4, 0.8};
  TruncatedKernel k2(2, 3.0);

  SUBCASE("sample floor enforced") {
    McSettings mc;
    mc.samples = 100;
    CHECK_THROWS_AS(bn_radial(rp, 2, radii, mc, k2, q), ConfigError);
  }
  SUBCASE("agrees with the deterministic path within 3 standard errors") {
    BornTermResult quad = b2_radial_quad(rp, k2, radii, q);
    McSettings mc;
    mc.samples = 20000;
    mc.seed = 101;
    BornTermResult est = bn_radial(rp, 2, radii, mc, k2, q);
    for (std::size_t i = 0; i < radii.size(); ++i)
      CHECK(std::abs(est.radial_values[i] - quad.radial_values[i]) <=
            3.0 * est.radial_std_err[i]);
  }
  SUBCASE("doubling samples shrinks the standard error like 1/sqrt(2)") {
    McSettings a;
    a.samples = 10000;
    a.seed = 7;
    McSettings b;
    b.samples = 20000;
    b.seed = 7;
    BornTermResult ra = bn_radial(rp, 2, radii, a, k2, q);
    BornTermResult rb = bn_radial(rp, 2, radii, b, k2, q);
    const double ratio = rb.radial_std_err[0] / ra.radial_std_err[0];
    CHECK(ratio > 0.6);
    CHECK(ratio < 0.82);
  }
}

TEST_CASE("sobolev norms") {
  const int m = 16;
  const double L = 4.0;
  GridPotential v = gaussian_preset(m, L);

  SUBCASE("s = 0 is the L2 norm") {
    CHECK(sobolev_norm(v.field, 0.0) == doctest::Approx(l2_norm(v.field)).epsilon(1e-10));
  }
  SUBCASE("monotone in s") {
    const double n0 = sobolev_norm(v.field, 0.2);
    const double n1 = sobolev_norm(v.field, 0.7);
    const double n2 = sobolev_norm(v.field, 1.4);
    CHECK(n0 <= n1);
    CHECK(n1 <= n2);
  }
  SUBCASE("single mode") {
    GridField e(m, L);
    const double d = kPi / L;
    e.fill([&](const Vec3& x) {
      return std::exp(cplx(0.0, d * (2.0 * x[0] + 1.0 * x[1])));
    });
    const double kmod = d * std::sqrt(5.0);
    for (double s : {0.0, 0.5, 1.5}) {
      const double expect = std::pow(1.0 + kmod * kmod, 0.5 * s) * std::pow(2.0 * L, 1.5);
      CHECK(sobolev_norm(e, s) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  SUBCASE("local norm bounds and vanishing") {
    // supported inside B(0, R): local <= global * (1 + eps_bump)
    PotentialSpec ps;
    ps.kind = "bump";
    ps.support_radius = 1.0;
    GridPotential w = make_grid_potential(ps, m, L);
    const double loc = local_sobolev(w.field, 0.5, 1.2);
    const double glob = sobolev_norm(w.field, 0.5);
    CHECK(loc <= 1.5 * glob);
    // field vanishing on B(0, 1.2 R) has zero local bound
    GridField far(m, L);
    far.fill([&](const Vec3& x) {
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      return cplx(r > 2.5 ? 1.0 : 0.0, 0.0);
    });
    CHECK(local_sobolev(far, 0.0, 1.5) == 0.0);
    CHECK_THROWS_AS(local_sobolev(w.field, 0.5, 2.5), ConfigError);
  }
}

TEST_CASE("smoothing report") {
  set_thread_count(2);
  const int m = 24;
  const double L = 4.0;
  PotentialSpec ps;
  ps.kind = "radial_tail";
  ps.tail_exponent = 2.0;
  ps.support_radius = 3.0;
  ps.amplitude = 1.0;
  GridPotential v = make_grid_potential(ps, m, L);
  SUBCASE("construction self-check: fitted tail exponent near 2") {
    SpectralField vhat = spectral_forward(v.field);
    auto shells = radial_average_abs(vhat);
    const double omega = vhat.dual_spacing() * (m / 2);
    const double slope = fit_loglog_slope(shells, 0.25 * omega, 0.9 * omega, 8);
    CHECK(-slope == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("fit window guard fires on small grids") {
    GridPotential g = gaussian_preset(m, L);
    TruncatedKernel k(2, 4.0);
    CHECK_THROWS_AS(smoothing_report(g, k, 0.5, 0.1), FitFailed);
  }
  SUBCASE("gaussian potential does not regress") {
    // a smooth potential and its quadratic term are both tiny at the
    // lattice edge relative to their peaks
    GridPotential g = gaussian_preset(32, L);
    TruncatedKernel k(2, 4.0);
    SpectralField vhat = spectral_forward(g.field);
    SpectralField beta = b2_beta_lattice(vhat, vhat, k, 1);
    auto edge_ratio = [](const SpectralField& f, double lo, double hi) {
      auto shells = radial_average_abs(f);
      double peak = 0.0, edge = 0.0;
      for (const auto& sh : shells) {
        peak = std::max(peak, sh.mean_abs);
        if (sh.radius >= lo && sh.radius <= hi) edge = std::max(edge, sh.mean_abs);
      }
      return edge / peak;
    };
    const double omega = vhat.dual_spacing() * 16;
    CHECK(edge_ratio(vhat, 0.8 * omega, omega) < 1e-2);
    CHECK(edge_ratio(beta, 0.4 * omega, 0.5 * omega) < 1e-2);
  }
}

TEST_CASE("truncated transform") {
  const int m = 16;
  const double L = 4.0;
  GridPotential v = gaussian_preset(m, L);
  TruncatedKernel k(2, 4.0);
  QuadratureSpec q;

  SUBCASE("first order is the identity") {
    TransformResult r = truncated_transform(v, 1, {}, k, q);
    double err = 0.0;
    for (std::size_t i = 0; i < r.field.a.size(); ++i)
      err = std::max(err, std::abs(r.field.a[i] - v.field.a[i]));
    CHECK(err == 0.0);
    CHECK(r.term_l2_norms.size() == 1);
  }
  SUBCASE("order two adds the quadratic term") {
    std::map<int, TermMethod> methods{{2, TermMethod::fourier_grid}};
    TransformResult r = truncated_transform(v, 2, methods, k, q);
    CHECK(r.term_l2_norms.size() == 2);
    CHECK(r.term_l2_norms[1] > 0.0);
    BornTermResult b = b2_fourier(v, k);
    GridField expect = v.field;
    axpy(expect, cplx(1.0, 0.0), b.field);
    double err = 0.0;
    for (std::size_t i = 0; i < expect.a.size(); ++i)
      err = std::max(err, std::abs(expect.a[i] - r.field.a[i]));
    CHECK(err < 1e-14);
  }
  SUBCASE("missing method propagates an error") {
    CHECK_THROWS_AS(truncated_transform(v, 2, {}, k, q), ConfigError);
  }
  SUBCASE("radial transform with term norms") {
    RadialPotential rp = make_radial_gaussian(1.0, 0.5, 1.5);
    std::vector<double> radii = {0.0, 0.5, 1.0};
    std::map<int, TermMethod> methods{{2, TermMethod::radial_quad}};
    McSettings mc;
    RadialTransformResult r = radial_truncated_transform(rp, 2, methods, radii, mc, q);
    CHECK(r.terms.size() == 2);
    CHECK(r.term_norms[0] > r.term_norms[1]);  // small-potential decay
    CHECK(r.values[1] == doctest::Approx(r.terms[0][1] + r.terms[1][1]));
  }
}

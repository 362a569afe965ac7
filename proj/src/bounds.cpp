#include "bsc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bsc/quadrature.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;

double bracket(double x) { return std::sqrt(1.0 + x * x); }  // <x>
}  // namespace

SobolevParams::SobolevParams(std::vector<double> s, double eps, double m_)
    : s_list(std::move(s)), epsilon(eps), m(m_) {
  if (s_list.size() < 2) throw ConfigError("SobolevParams needs at least two exponents");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("SobolevParams: eps in (0,1)");
  double min_sa = std::numeric_limits<double>::infinity();
  double sum_a = 0.0;
  for (double sj : s_list) {
    if (sj < m - 1e-12) throw ConfigError("SobolevParams: s_j must be >= m");
    const double aj = std::min(sj - m, 1.0 - epsilon);
    a_list.push_back(aj);
    sum_a += aj;
    min_sa = std::min(min_sa, sj - aj);
  }
  sigma = min_sa + sum_a;
}

double weight_m(const std::vector<double>& s_list, const std::vector<Vec3>& xi) {
  const std::size_t n = xi.size();
  if (s_list.size() != n || n < 2) throw ConfigError("weight_m: mismatched sizes");
  auto diff_norm = [](const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
  };
  const Vec3 sum0 = {xi[0][0] + xi[n - 1][0], xi[0][1] + xi[n - 1][1],
                     xi[0][2] + xi[n - 1][2]};
  double w = std::pow(1.0 + sum0[0] * sum0[0] + sum0[1] * sum0[1] + sum0[2] * sum0[2],
                      -0.5 * s_list[0]);
  for (std::size_t j = 1; j < n; ++j) {
    const double d = diff_norm(xi[j], xi[j - 1]);
    w *= std::pow(1.0 + d * d, -0.5 * s_list[j]);
  }
  return w;
}

HGammaLemmaReport check_hgamma_lemma(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-50.0, 50.0);
  std::uniform_real_distribution<double> upos(0.05, 4.0);
  HGammaLemmaReport rep;
  rep.samples = samples;
  rep.min_slack_basic = std::numeric_limits<double>::infinity();
  rep.min_slack_shift = std::numeric_limits<double>::infinity();
  for (long i = 0; i < samples; ++i) {
    const double s = uni(rng), t = uni(rng), r = uni(rng);
    const double lhs = (1.0 + std::abs(s - t)) * (1.0 + std::abs(t));
    const double rhs = 1.0 + std::abs(s);
    if (lhs < rhs)
      throw CounterexampleFound("1+|s-t| >= (1+|s|)/(1+|t|) failed");
    rep.min_slack_basic = std::min(rep.min_slack_basic, lhs - rhs);

    const double g = upos(rng);
    const double lhs2 =
        (g + std::abs(t)) * (g + std::abs(t)) / (g * g) * h_gamma(g, s, r);
    const double rhs2 = h_gamma(g, s, r + t);
    if (lhs2 < rhs2)
      throw CounterexampleFound("h_gamma shift bound failed");
    rep.min_slack_shift = std::min(rep.min_slack_shift, lhs2 - rhs2);
  }
  return rep;
}

std::pair<double, double> check_fs_bound(double r, double eta_mod, double s, int n_odd) {
  if (n_odd < 3 || n_odd % 2 == 0) throw ConfigError("check_fs_bound: odd n >= 3");
  const double m = 0.5 * (n_odd - 3);
  if (!(s >= m - 1e-12) || !(s < m + 1.0))
    throw ConfigError("check_fs_bound requires m <= s < m+1");
  double lhs;
  if (n_odd == 3) {
    const SphereRule& rule = sphere_rule(48);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.dir.size(); ++i) {
      const double dx = r * rule.dir[i][0];
      const double dy = r * rule.dir[i][1];
      const double dz = r * rule.dir[i][2] - eta_mod;
      acc += rule.w[i] * std::pow(1.0 + dx * dx + dy * dy + dz * dz, -s);
    }
    lhs = acc;
  } else {
    // f_s = c_{n-2} int_{-1}^{1} (1 + r^2 + eta^2 - 2 r eta u)^{-s} (1-u^2)^m du
    const double cn2 = 2.0 * std::pow(kPi, 0.5 * (n_odd - 1)) / std::tgamma(0.5 * (n_odd - 1));
    const GaussRule& g = gauss_legendre(96);
    double acc = 0.0;
    for (int i = 0; i < 96; ++i) {
      const double u = g.x[i];
      acc += g.w[i] * std::pow(1.0 + r * r + eta_mod * eta_mod - 2.0 * r * eta_mod * u, -s) *
             std::pow(1.0 - u * u, m);
    }
    lhs = cn2 * acc;
  }
  const double cn2 = 2.0 * std::pow(kPi, 0.5 * (n_odd - 1)) / std::tgamma(0.5 * (n_odd - 1));
  const double c1 = std::pow(2.0, m + 1.0) * cn2 / (m + 1.0 - s);
  const double rhs = c1 * std::pow(1.0 + r * r, -s);
  if (lhs > rhs * (1.0 + 1e-9)) throw BoundViolated("f_s bound violated");
  return {lhs, rhs};
}

namespace {

// int_{-1}^{1} <q_+>^{-2s1} <q_->^{-2s2} du at fixed radii
double angular_factor(double r, double rho, double s1, double s2, int pts) {
  const GaussRule& g = gauss_legendre(pts);
  const double base = 1.0 + r * r + rho * rho;
  double acc = 0.0;
  for (int i = 0; i < pts; ++i) {
    const double cross = 2.0 * r * rho * g.x[i];
    acc += g.w[i] * std::pow(base + cross, -s1) * std::pow(base - cross, -s2);
  }
  return acc;
}

}  // namespace

HGammaConvResult check_hgamma_conv(double gamma, double rho, double eta_mod, double s,
                                   const QuadratureSpec& q) {
  // reduce over the sphere: int_0^inf h^2(r,rho) r^2 f_s(r, eta) dr with
  // f_s evaluated by the 1-d reduction (n = 3)
  auto f_s = [&](double r) {
    const GaussRule& g = gauss_legendre(64);
    double acc = 0.0;
    const double base = 1.0 + r * r + eta_mod * eta_mod;
    for (int i = 0; i < 64; ++i)
      acc += g.w[i] * std::pow(base - 2.0 * r * eta_mod * g.x[i], -s);
    return 2.0 * kPi * acc;
  };
  auto f = [&](double r) {
    const double h = h_gamma(gamma, r, rho);
    return h * h * r * r * f_s(r);
  };
  const double r_end = rho + 60.0 * std::max(gamma, 1.0) + 2.0 * eta_mod;
  const double w0 = std::min(0.5, 0.5 * gamma);
  const double lhs =
      integrate_adaptive(f, 0.0, r_end, w0, 1e-7, q.abs_tol, q.max_subdivisions);
  HGammaConvResult res;
  res.lhs = lhs;
  res.implied_c = lhs * gamma * std::pow(1.0 + rho * rho, s);  // m = 0
  return res;
}

std::pair<double, double> check_T2(double gamma, double xi_mod, double s1, double s2,
                                   const QuadratureSpec& q) {
  auto f = [&](double r) {
    const double h = h_gamma(gamma, r, xi_mod);
    return h * h * r * r * angular_factor(r, xi_mod, s1, s2, 64);
  };
  const double r_end = xi_mod + 80.0 * std::max(gamma, 1.0) + 40.0;
  const double w0 = std::min(0.5, 0.5 * gamma);
  const double lhs =
      2.0 * kPi * integrate_adaptive(f, 0.0, r_end, w0, 1e-7, q.abs_tol, q.max_subdivisions);
  const double envelope = std::pow(1.0 + xi_mod * xi_mod, -(s1 + s2)) / gamma;
  return {lhs, envelope};
}

double a2_value(double R, const SobolevParams& p, const QuadratureSpec& q, double* sup_at) {
  if (p.s_list.size() != 2) throw ConfigError("a2_value works on two exponents");
  TruncatedKernel kern(2, R);
  kern.quad = q;
  const double s1 = p.s_list[0], s2 = p.s_list[1];
  std::vector<double> rho_samples = {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.2,
                                     1.6, 2.4, 3.2, 4.8, 6.4, 9.6, 12.8};
  double best = 0.0, best_at = 0.0;
  for (double rho : rho_samples) {
    auto f = [&](double r1) {
      const double kv = fourier_E_radii(kern, RadialTuple{{r1, rho}}).real();
      return kv * kv * r1 * r1 * angular_factor(r1, rho, s1, s2, 48);
    };
    const double r_end = rho + 120.0 / R + 60.0;
    const double w0 = std::min(0.3, kPi / (8.0 * R));
    const double inner =
        2.0 * kPi * integrate_adaptive(f, 0.0, r_end, w0, 1e-6, q.abs_tol, q.max_subdivisions);
    const double val = std::pow(1.0 + 4.0 * rho * rho, p.sigma) * inner;
    if (val > best) {
      best = val;
      best_at = rho;
    }
  }
  if (sup_at) *sup_at = best_at;
  return best;
}

A2ChainReport check_A2_chain(double R, const SobolevParams& p, const GridPotential& v1,
                             const GridPotential& v2, const QuadratureSpec& q) {
  if (p.s_list.size() != 2) throw ConfigError("check_A2_chain is the N = 2 instance");
  A2ChainReport rep;
  rep.a_value = a2_value(R, p, q, &rep.sup_at);

  TruncatedKernel kern(2, R);
  kern.quad = q;
  BornTermResult b = b2_fourier_pair(v1, v2, kern);
  const double lhs = sobolev_norm(b.field, p.sigma);
  const double n1 = sobolev_norm(v1.field, p.s_list[0]);
  const double n2 = sobolev_norm(v2.field, p.s_list[1]);
  rep.lhs_sq = lhs * lhs;
  rep.rhs_sq = std::pow(2.0 * kPi, -3.0) * rep.a_value * n1 * n1 * n2 * n2;
  rep.inequality_holds = rep.lhs_sq <= rep.rhs_sq * (1.0 + 1e-9);

  // envelope at gamma = 1/R: A <= C^2 2^{2 min(s_j - a_j)} (2)^{10} R e^4
  double min_sa = std::min(p.s_list[0] - p.a_list[0], p.s_list[1] - p.a_list[1]);
  const double envelope =
      std::pow(2.0, 2.0 * min_sa) * std::pow(2.0, 10.0) * R * std::exp(4.0);
  rep.envelope_implied_c = std::sqrt(rep.a_value / envelope);
  return rep;
}

ScalingSweepReport main_scaling_sweep(int n_order, const std::vector<double>& supports,
                                      const std::vector<double>& amplitudes, double s,
                                      double epsilon, const McSettings& mc,
                                      const QuadratureSpec& q) {
  if (n_order != 2 && n_order != 3)
    throw ConfigError("main_scaling_sweep supports N in {2,3}");
  if (supports.size() < 2 || amplitudes.size() < 2)
    throw ConfigError("main_scaling_sweep needs >= 2 supports and amplitudes");

  const double a = std::min(s, 1.0 - epsilon);  // m = 0
  const double sigma = (s - a) + n_order * a;

  ScalingSweepReport rep;
  rep.order = n_order;
  rep.supports = supports;
  rep.sigma = sigma;

  double amp_spread = 0.0;
  for (double R : supports) {
    std::vector<double> ratios_here;
    for (double A : amplitudes) {
      RadialPotential v = make_radial_gaussian(A, R / 4.0, R);
      // ||v||_(s) from the analytic profile
      std::vector<double> rho, vh;
      const double pmax = v.profile_decay_radius;
      for (int i = 0; i <= 4000; ++i) {
        rho.push_back(pmax * i / 4000.0);
        vh.push_back(v.fourier_profile(rho.back()));
      }
      const double vnorm = radial_sobolev_norm(rho, vh, s);

      std::vector<double> out_r;
      for (int i = 0; i <= 160; ++i) out_r.push_back(1.25 * R * i / 160.0);
      BornTermResult term;
      TruncatedKernel kern(n_order, 2.0 * (n_order - 1) * R);
      kern.quad = q;
      if (n_order == 2) {
        term = b2_radial_quad(v, kern, out_r, q);
      } else {
        McSettings m2 = mc;
        m2.gamma = n_order / (4.0 * R);
        term = bn_radial(v, n_order, out_r, m2, kern, q);
      }
      // localize to B(0,R) with the standard window and take the sigma-norm
      std::vector<double> wr(out_r.size());
      for (std::size_t i = 0; i < out_r.size(); ++i)
        wr[i] = term.radial_values[i] * smooth_radial_window(out_r[i], R);
      std::vector<double> rho_out;
      const double pout = 160.0 / R;
      for (int i = 0; i <= 2400; ++i) rho_out.push_back(pout * i / 2400.0);
      std::vector<double> what = radial_fourier_profile(out_r, wr, rho_out);
      const double bnorm = radial_sobolev_norm(rho_out, what, sigma);
      ratios_here.push_back(bnorm / std::pow(vnorm, n_order));
    }
    double lo = *std::min_element(ratios_here.begin(), ratios_here.end());
    double hi = *std::max_element(ratios_here.begin(), ratios_here.end());
    if (hi > 0.0) amp_spread = std::max(amp_spread, (hi - lo) / hi);
    rep.ratios.push_back(0.5 * (lo + hi));
  }

  // least-squares slope of log ratio vs log R
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(supports.size());
  for (int i = 0; i < n; ++i) {
    const double x = std::log(supports[i]);
    const double y = std::log(rep.ratios[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.fitted_r_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double cbest = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = std::pow(
        rep.ratios[i] * std::pow(n_order, 0.5 * n_order) / std::pow(supports[i], 0.5 * (n_order - 1)),
        1.0 / n_order);
    cbest = std::max(cbest, c);
  }
  rep.implied_c = cbest;
  rep.amplitude_scaling_error = amp_spread;
  return rep;
}

}  // namespace bsc

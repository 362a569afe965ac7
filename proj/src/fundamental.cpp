#include "bsc/fundamental.hpp"

#include <cmath>
#include <limits>

#include "bsc/quadrature.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::complex<double> fourier_E_radii(const TruncatedKernel& k, const RadialTuple& moduli) {
  if (moduli.size() != static_cast<std::size_t>(k.order))
    throw ConfigError("fourier_E: tuple length must equal kernel order");
  const double R = k.radius;
  std::vector<double> scaled(moduli.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) scaled[i] = R * moduli[i];
  const double amp = std::pow(R, 2.0 * k.order - 2.0);
  if (k.table && k.table->order == k.order) {
    bool in_range = true;
    for (double s : scaled)
      if (s > k.table->max_radius()) in_range = false;
    if (in_range) return amp * k.table->interpolate(RadialTuple(scaled));
    if (!k.on_demand)
      throw TableRangeExceeded("frequency outside kernel table and on-demand evaluation disabled");
  } else if (!k.on_demand) {
    throw TableRangeExceeded("no kernel table attached and on-demand evaluation disabled");
  }
  // the cutoff integral has a closed per-piece evaluation away from
  // clustered chain radii; the quadrature path covers the rest
  try {
    return amp * std::complex<double>(fn_exact(k.order, RadialTuple(scaled)), 0.0);
  } catch (const NearDegenerateRadii&) {
    return amp * f_n_eval(k.order, RadialTuple(scaled), k.quad);
  }
}

std::complex<double> fourier_E(const TruncatedKernel& k, const FrequencyTuple& xi) {
  std::vector<double> moduli(xi.xi.size());
  for (std::size_t i = 0; i < xi.xi.size(); ++i) moduli[i] = norm3(xi.xi[i]);
  return fourier_E_radii(k, RadialTuple(moduli));
}

namespace {

void require_last_separated(const RadialTuple& r) {
  const double thr = radii_separation_threshold(r);
  const double bn = r.radii.back() * r.radii.back();
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    const double bj = r[j] * r[j];
    if (std::abs(bn - bj) < thr)
      throw DegenerateRadii("last radius square coincides with an earlier one");
  }
}

}  // namespace

std::vector<std::complex<double>> pv_product(int n_order, const RadialTuple& r,
                                             const std::vector<double>& sigma_seq) {
  if (r.size() != static_cast<std::size_t>(n_order) || n_order < 2)
    throw ConfigError("pv_product: tuple length must equal order >= 2");
  require_last_separated(r);
  const double bn = r.radii.back() * r.radii.back();
  double prefactor = 1.0;
  for (std::size_t j = 0; j + 1 < r.size(); ++j)
    prefactor *= (bn - r[j] * r[j]);
  const double sign = (n_order % 2 == 0) ? -1.0 : 1.0;
  std::vector<std::complex<double>> out;
  out.reserve(sigma_seq.size());
  for (double s : sigma_seq)
    out.push_back(prefactor * sign * laplace_F_closed(r, ComplexShift({s, 0.0})));
  return out;
}

std::pair<std::complex<double>, std::complex<double>> recursion_check(int n_order,
                                                                      const RadialTuple& r,
                                                                      double sigma) {
  if (n_order < 3 || r.size() != static_cast<std::size_t>(n_order))
    throw ConfigError("recursion_check needs N >= 3 and a matching tuple");
  require_last_separated(r);
  const ComplexShift s({sigma, 0.0});
  const double bn = r.radii.back() * r.radii.back();
  const double bn1 = r.radii[r.size() - 2] * r.radii[r.size() - 2];
  const double sign_full = (n_order % 2 == 0) ? -1.0 : 1.0;
  std::complex<double> lhs = (bn - bn1) * sign_full * laplace_F_closed(r, s);
  std::vector<double> reduced(r.radii.begin(), r.radii.end() - 2);
  reduced.push_back(r.radii.back());
  const double sign_red = ((n_order - 1) % 2 == 0) ? -1.0 : 1.0;
  std::complex<double> rhs = sign_red * laplace_F_closed(RadialTuple(reduced), s);
  return {lhs, rhs};
}

namespace {

// normalized double spherical mean of g at radii (s, t)
double double_sphere_mean(const PairFunction& g, double s, double t) {
  if (g.radial_mean) return g.radial_mean(s, t);
  const SphereRule& rule = sphere_rule(g.angular_order);
  const double norm = 4.0 * kPi;
  double acc = 0.0;
  Vec3 xs, yt;
  for (std::size_t i = 0; i < rule.dir.size(); ++i) {
    xs = {s * rule.dir[i][0], s * rule.dir[i][1], s * rule.dir[i][2]};
    double inner = 0.0;
    for (std::size_t j = 0; j < rule.dir.size(); ++j) {
      yt = {t * rule.dir[j][0], t * rule.dir[j][1], t * rule.dir[j][2]};
      inner += rule.w[j] * g.eval(xs, yt);
    }
    acc += rule.w[i] * inner;
  }
  return acc / (norm * norm);
}

}  // namespace

double e2_pair(const PairFunction& g, const QuadratureSpec& q) {
  // <E_2, g> = -(4 pi^2)^{-1} int_0^inf -d/dw [ (4pi)^2 t^2 sqrt(w)
  //            hat g(sqrt(w), t) / 2 ]_{w = t^2} dt
  const double four_pi_sq = (4.0 * kPi) * (4.0 * kPi);
  // W as a function of s = sqrt(w) is smooth through s = 0, so the w-step
  // h_w = 1e-3 (1 + t^2) is taken through the chain rule: dW/dw = S'(s)/(2s).
  auto inner = [&](double t) {
    if (t <= 1e-8) return 0.0;
    auto S = [&](double s) { return four_pi_sq * t * t * s * double_sphere_mean(g, s, t) / 2.0; };
    const double h = std::min(1e-3 * (1.0 + t * t) / (2.0 * t), 0.45 * t);
    auto diff = [&](double hh) { return (S(t + hh) - S(t - hh)) / (2.0 * hh); };
    const double d1 = diff(h);
    const double d2 = diff(0.5 * h);
    return -(4.0 * d2 - d1) / 3.0 / (2.0 * t);
  };
  const double T = g.radius;
  double width = std::max(T / 48.0, 1e-3);
  const double rel = std::max(q.rel_tol, 1e-9);
  // panel refinement with a noise floor: the central differences carry
  // cancellation noise ~1e-10 relative to the integrand scale, so demanding
  // more than that of the t-quadrature would never converge on pairings
  // that are exactly zero by symmetry
  double prev = integrate_panels(inner, 0.0, T, width);
  const double scale = integrate_panels([&](double t) { return std::abs(inner(t)); }, 0.0,
                                        T, width);
  double prev_diff = std::numeric_limits<double>::infinity();
  for (int level = 1;; ++level) {
    width *= 0.5;
    if ((T / width) > static_cast<double>(q.max_subdivisions))
      throw QuadratureBudgetExceeded("e2_pair: t-quadrature exceeded max_subdivisions");
    const double cur = integrate_panels(inner, 0.0, T, width);
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= rel * std::abs(cur) + 3e-10 * scale + q.abs_tol) break;
    // refinement that stops improving has hit the differencing noise floor
    // (hard-truncated potentials leave small kinks in the spherical means)
    if (level >= 3 && diff > 0.25 * prev_diff) break;
    prev_diff = diff;
  }
  return -prev / (4.0 * kPi * kPi);
}

}  // namespace bsc

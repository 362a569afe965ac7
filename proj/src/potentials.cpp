#include "bsc/potentials.hpp"

#include <cmath>
#include <random>

#include "bsc/quadrature.hpp"
#include "bsc/special_kernels.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double smooth_radial_window(double r, double plateau) {
  static const CutoffSpec cut(3, 1.0);
  const double u = 5.0 * r / plateau - 4.0;
  if (u <= 0.0) return 1.0;
  return chi(cut, u);
}

namespace {

GridPotential from_evaluator(const std::function<double(const Vec3&)>& f, int m, double L,
                             double support_radius) {
  GridPotential p;
  p.field = GridField(m, L);
  p.field.fill([&](const Vec3& x) { return cplx(f(x), 0.0); });
  p.support_radius = support_radius;
  p.eval = f;
  return p;
}

}  // namespace

GridPotential make_grid_potential(const PotentialSpec& spec, int m, double L) {
  if (spec.kind == "gaussian") {
    const double A = spec.amplitude, w2 = spec.width * spec.width, R = spec.support_radius;
    auto fr = [A, w2, R](double r) {
      if (r > R) return 0.0;
      return A * std::exp(-r * r / w2);
    };
    auto f = [fr](const Vec3& x) {
      return fr(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
    GridPotential p = from_evaluator(f, m, L, R);
    p.radial_eval = fr;
    return p;
  }
  if (spec.kind == "bump") {
    const double A = spec.amplitude, R = spec.support_radius;
    auto fr = [A, R](double r) {
      const double q = r * r / (R * R);
      if (q >= 1.0) return 0.0;
      return A * std::exp(1.0 - 1.0 / (1.0 - q));
    };
    auto f = [fr](const Vec3& x) {
      return fr(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
    GridPotential p = from_evaluator(f, m, L, R);
    p.radial_eval = fr;
    return p;
  }
  if (spec.kind == "trig_random") {
    // spec.modes random low-frequency plane waves, windowed to the support
    const double R = spec.support_radius;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::uniform_int_distribution<int> iw(-2, 2);
    struct Mode {
      Vec3 k;
      double amp, ph;
    };
    std::vector<Mode> modes;
    const double base = kPi / L;
    const int want = std::max(1, spec.modes);
    while (static_cast<int>(modes.size()) < want) {
      const int i = iw(rng), j = iw(rng), k = iw(rng);
      if (i == 0 && j == 0 && k == 0) continue;
      modes.push_back({{base * i, base * j, base * k}, gauss(rng), phase(rng)});
    }
    const double A = spec.amplitude;
    const double plateau = R / 1.2;
    auto f = [modes, A, plateau](const Vec3& x) {
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      const double win = smooth_radial_window(r, plateau);
      if (win == 0.0) return 0.0;
      double s = 0.0;
      for (const auto& md : modes)
        s += md.amp * std::cos(md.k[0] * x[0] + md.k[1] * x[1] + md.k[2] * x[2] + md.ph);
      return A * win * s / std::sqrt(static_cast<double>(modes.size()));
    };
    return from_evaluator(f, m, L, R);
  }
  if (spec.kind == "radial_tail") {
    GridPotential p;
    p.field = GridField(m, L);
    SpectralField s;
    s.m = m;
    s.box_halfwidth = L;
    s.c.assign(p.field.size(), cplx(0.0, 0.0));
    const double tau = spec.tail_exponent;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double r = s.xi_norm(i, j, k);
          s.at(i, j, k) = spec.amplitude * std::pow(1.0 + r * r, -0.5 * tau);
        }
    GridField raw = spectral_inverse(s);
    // exp-type taper: the mollified-indicator window oscillates too hard in
    // frequency and would distort the calibrated tail
    const double r0 = 0.6 * spec.support_radius;
    const double tw = 0.4 * spec.support_radius;
    auto taper = [r0, tw](double r) {
      if (r <= r0) return 1.0;
      const double u = (r - r0) / tw;
      if (u >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const Vec3 x = {raw.coord(i), raw.coord(j), raw.coord(k)};
          const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
          p.field.at(i, j, k) = raw.at(i, j, k).real() * taper(r);
        }
    p.support_radius = spec.support_radius;
    p.sobolev_s = tau - 1.5;
    return p;
  }
  throw ConfigError("unknown potential kind: " + spec.kind);
}

RadialPotential make_radial_gaussian(double amplitude, double width, double support_radius) {
  RadialPotential p;
  const double c = amplitude * std::pow(kPi, 1.5) * width * width * width;
  const double w2 = width * width;
  p.fourier_profile = [c, w2](double rho) { return c * std::exp(-w2 * rho * rho / 4.0); };
  p.support_radius = support_radius;
  // |vhat| < 1e-14 relative beyond this radius
  p.profile_decay_radius = 2.0 * std::sqrt(14.0 * std::log(10.0)) / width;
  return p;
}

double radial_potential_value(const RadialPotential& v, double r) {
  auto f = [&](double rho) {
    const double s = rho * r;
    const double sinc = s == 0.0 ? 1.0 : std::sin(s) / s;
    return v.fourier_profile(rho) * rho * rho * sinc;
  };
  const double width = std::min(0.25, kPi / (4.0 * std::max(r, 1.0)));
  const double val = integrate_panels(f, 0.0, v.profile_decay_radius, width);
  return val / (2.0 * kPi * kPi);
}

}  // namespace bsc

#include "bsc/wave.hpp"

#include <cmath>

#include "bsc/errors.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;

double sinc_prop(double t, double r) { return r == 0.0 ? t : std::sin(t * r) / r; }
}  // namespace

GridField free_propagate(const GridField& f, double t) {
  if (t < 0.0) throw ConfigError("free_propagate: t must be >= 0");
  GridField out = f;
  apply_radial_multiplier(out, [t](double r) { return cplx(sinc_prop(t, r), 0.0); });
  return out;
}

GridField free_velocity(const GridField& f, double t) {
  GridField out = f;
  apply_radial_multiplier(out, [t](double r) { return cplx(std::cos(t * r), 0.0); });
  return out;
}

namespace {

// Simpson weights for the nodes 0..k of a uniform grid with spacing ds;
// odd k >= 3 ends with a 3/8 segment, k == 1 falls back to the trapezoid
// (the integrand vanishes at both nodes there).
std::vector<double> simpson_weights(int k, double ds) {
  std::vector<double> w(k + 1, 0.0);
  if (k == 0) return w;
  if (k == 1) {
    w[0] = w[1] = 0.5 * ds;
    return w;
  }
  int simpson_end = (k % 2 == 0) ? k : k - 3;
  if (k % 2 != 0 && k < 3) simpson_end = 0;
  for (int i = 0; i < simpson_end; i += 2) {
    w[i] += ds / 3.0;
    w[i + 1] += 4.0 * ds / 3.0;
    w[i + 2] += ds / 3.0;
  }
  if (k % 2 != 0) {
    const int b = simpson_end;
    w[b] += 3.0 * ds / 8.0;
    w[b + 1] += 9.0 * ds / 8.0;
    w[b + 2] += 9.0 * ds / 8.0;
    w[b + 3] += 3.0 * ds / 8.0;
  }
  return w;
}

}  // namespace

GridField born_term(const GridField& v, const GridField& f, int n_order, double t, int steps) {
  if (n_order < 0) throw ConfigError("born_term: order must be >= 0");
  if (n_order == 0) return free_propagate(f, t);
  if (steps < 4) throw ConfigError("born_term: steps must be >= 4");
  if (steps % 2 != 0) ++steps;
  if (v.m != f.m) throw ConfigError("born_term: v and f grids differ");

  const int m = f.m;
  const std::size_t nelem = f.a.size();
  const double ds = t / steps;
  const double inv_m3 = 1.0 / static_cast<double>(nelem);

  std::vector<double> absxi(nelem);
  {
    const double d = kPi / f.box_halfwidth;
    std::vector<double> comp(m);
    for (int i = 0; i < m; ++i) comp[i] = d * (i < m / 2 ? i : i - m);
    std::size_t p = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double xy2 = comp[i] * comp[i] + comp[j] * comp[j];
        for (int k = 0; k < m; ++k) absxi[p++] = std::sqrt(xy2 + comp[k] * comp[k]);
      }
  }

  std::vector<cplx> fhat = f.a;
  fft_raw(fhat, m, -1);

  // ghat[i] = raw transform of v * u_level(s_i); level 0 is the free flow
  auto make_forcing = [&](const std::vector<cplx>& uhat_raw, std::vector<cplx>& out) {
    out = uhat_raw;
    fft_raw(out, m, +1);
    for (std::size_t p = 0; p < nelem; ++p) out[p] *= inv_m3 * v.a[p];
    fft_raw(out, m, -1);
  };

  std::vector<std::vector<cplx>> ghat(steps + 1);
  {
    std::vector<cplx> uhat(nelem);
    for (int i = 1; i <= steps; ++i) {
      const double si = i * ds;
      for (std::size_t p = 0; p < nelem; ++p) uhat[p] = fhat[p] * sinc_prop(si, absxi[p]);
      make_forcing(uhat, ghat[i]);
    }
    ghat[0].assign(nelem, cplx(0.0, 0.0));  // u(0) = 0
  }

  std::vector<cplx> acc(nelem);
  for (int level = 1; level <= n_order; ++level) {
    const bool last = (level == n_order);
    std::vector<std::vector<cplx>> ghat_next;
    if (!last) {
      ghat_next.resize(steps + 1);
      ghat_next[0].assign(nelem, cplx(0.0, 0.0));
    }
    const int k_lo = last ? steps : 1;
    for (int k = k_lo; k <= steps; ++k) {
      const auto w = simpson_weights(k, ds);
      std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
      for (int i = 1; i < k; ++i) {  // i = 0 forcing and i = k multiplier vanish
        const double tau = (k - i) * ds;
        const double wi = w[i];
        const std::vector<cplx>& g = ghat[i];
        for (std::size_t p = 0; p < nelem; ++p)
          acc[p] += (wi * sinc_prop(tau, absxi[p])) * g[p];
      }
      if (last) break;
      make_forcing(acc, ghat_next[k]);
    }
    if (last) break;
    ghat = std::move(ghat_next);
  }

  GridField out(f.m, f.box_halfwidth);
  out.a = std::move(acc);
  fft_raw(out.a, m, +1);
  for (auto& z : out.a) z *= inv_m3;
  return out;
}

WaveState wave_solve(const GridField& v, const GridField& f, double t, double dt) {
  if (v.m != f.m) throw ConfigError("wave_solve: v and f grids differ");
  if (!(t >= 0.0) || !(dt > 0.0)) throw ConfigError("wave_solve: need t >= 0 and dt > 0");
  const int m = f.m;
  const double d = kPi / f.box_halfwidth;
  const double max_xi = std::sqrt(3.0) * d * (m / 2);
  if (dt >= 2.0 / max_xi) throw UnstableTimestep("dt must be below 2/max|xi|");

  const long steps = std::lround(std::ceil(t / dt - 1e-12));
  const double h = steps > 0 ? t / steps : 0.0;
  const std::size_t nelem = f.a.size();

  std::vector<double> absxi(nelem);
  {
    std::vector<double> comp(m);
    for (int i = 0; i < m; ++i) comp[i] = d * (i < m / 2 ? i : i - m);
    std::size_t p = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double xy2 = comp[i] * comp[i] + comp[j] * comp[j];
        for (int k = 0; k < m; ++k) absxi[p++] = std::sqrt(xy2 + comp[k] * comp[k]);
      }
  }

  std::vector<cplx> uhat(nelem, cplx(0.0, 0.0));
  std::vector<cplx> vhat = f.a;
  fft_raw(vhat, m, -1);

  auto rotate = [&](double tau) {
    for (std::size_t p = 0; p < nelem; ++p) {
      const double r = absxi[p];
      const double c = std::cos(tau * r);
      const double s = sinc_prop(tau, r);  // sin(tau r)/r, -> tau at r = 0
      const cplx u0 = uhat[p], v0 = vhat[p];
      uhat[p] = c * u0 + s * v0;
      vhat[p] = -r * std::sin(tau * r) * u0 + c * v0;
    }
  };

  const double inv_m3 = 1.0 / static_cast<double>(nelem);
  std::vector<cplx> ugrid(nelem), vgrid(nelem);
  for (long sstep = 0; sstep < steps; ++sstep) {
    rotate(0.5 * h);
    ugrid = uhat;
    fft_raw(ugrid, m, +1);
    vgrid = vhat;
    fft_raw(vgrid, m, +1);
    for (std::size_t p = 0; p < nelem; ++p)
      vgrid[p] = (vgrid[p] - h * v.a[p] * ugrid[p]) * inv_m3;
    vhat = std::move(vgrid);
    fft_raw(vhat, m, -1);
    vgrid.resize(nelem);
    rotate(0.5 * h);
  }

  WaveState out;
  out.time = t;
  out.u = GridField(m, f.box_halfwidth);
  out.u_dot = GridField(m, f.box_halfwidth);
  out.u.a = std::move(uhat);
  fft_raw(out.u.a, m, +1);
  for (auto& z : out.u.a) z *= inv_m3;
  out.u_dot.a = std::move(vhat);
  fft_raw(out.u_dot.a, m, +1);
  for (auto& z : out.u_dot.a) z *= inv_m3;
  return out;
}

double free_energy(const WaveState& s) {
  SpectralField su = spectral_forward(s.u);
  SpectralField sv = spectral_forward(s.u_dot);
  const int m = su.m;
  const double scale = su.dual_cell_volume() / std::pow(2.0 * kPi, 3);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    double plane = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double r = su.xi_norm(i, j, k);
        plane += std::norm(sv.at(i, j, k)) + r * r * std::norm(su.at(i, j, k));
      }
    total += plane;
  }
  return total * scale;
}

double total_energy(const WaveState& s, const GridField& v) {
  double e = free_energy(s);
  double pot = 0.0;
  const int m = s.u.m;
  for (int i = 0; i < m; ++i) {
    double plane = 0.0;
    const std::size_t off = static_cast<std::size_t>(i) * m * m;
    for (int jk = 0; jk < m * m; ++jk)
      plane += v.a[off + jk].real() * std::norm(s.u.a[off + jk]);
    pot += plane;
  }
  return e + pot * s.u.cell_volume();
}

}  // namespace bsc

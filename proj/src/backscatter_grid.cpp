#include <algorithm>
#include <chrono>
#include <cmath>

#include "bsc/backscatter.hpp"
#include "bsc/parallel.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SpectralField b2_beta_lattice(const SpectralField& v1, const SpectralField& v2,
                              const TruncatedKernel& k, int stride) {
  if (k.order != 2) throw ConfigError("b2_beta_lattice: kernel order must be 2");
  if (v1.m != v2.m || v1.box_halfwidth != v2.box_halfwidth)
    throw ConfigError("b2_beta_lattice: spectral fields differ");
  if (stride < 1) throw ConfigError("b2_beta_lattice: stride must be >= 1");
  const int m = v1.m;
  const int half = m / 2;
  const double d = v1.dual_spacing();

  // distinct squared-radius integers on the lattice
  const int qmax = 3 * half * half;
  std::vector<int> qidx(qmax + 1, -1);
  for (int i = -half; i < half; ++i)
    for (int j = -half; j < half; ++j)
      for (int kk = -half; kk < half; ++kk) qidx[i * i + j * j + kk * kk] = 0;
  int nq = 0;
  for (int q = 0; q <= qmax; ++q)
    if (qidx[q] == 0) qidx[q] = nq++;

  std::vector<double> qrad(nq);
  for (int q = 0; q <= qmax; ++q)
    if (qidx[q] >= 0) qrad[qidx[q]] = d * std::sqrt(static_cast<double>(q));

  // kernel values deduplicated over (|xi_2|, |xi_1|) pairs
  std::vector<double> kv(static_cast<std::size_t>(nq) * nq);
  for_each_chunk(nq, [&](std::size_t q2) {
    double* row = &kv[q2 * nq];
    for (int q1 = 0; q1 < nq; ++q1)
      row[q1] = fourier_E_radii(k, RadialTuple{{qrad[q1], qrad[q2]}}).real();
  });

  SpectralField beta;
  beta.m = m;
  beta.box_halfwidth = v1.box_halfwidth;
  beta.c.assign(v1.c.size(), cplx(0.0, 0.0));

  const double cell = d * d * d * stride * stride * stride;
  // the -M/2 plane has no +M/2 partner on the lattice; dropping it keeps the
  // sum hermitian, so real potentials give real output
  auto range_lo = [&](int w2) {
    return std::max({-half + 1, -half + 1 - w2, w2 - half + 1});
  };
  auto range_hi = [&](int w2) {
    return std::min({half - 1, half - 1 - w2, w2 + half - 1});
  };

  // first multiple of stride at or above lo
  auto align_up = [stride](int lo) {
    if (stride == 1) return lo;
    const int r = ((lo % stride) + stride) % stride;
    return r == 0 ? lo : lo + (stride - r);
  };

  for_each_chunk(m, [&](std::size_t plane) {
    const int f2x = static_cast<int>(plane);
    const int w2x = f2x < half ? f2x : f2x - m;
    if (w2x == -half) return;
    const int x_lo = align_up(range_lo(w2x)), x_hi = range_hi(w2x);
    for (int f2y = 0; f2y < m; ++f2y) {
      const int w2y = f2y < half ? f2y : f2y - m;
      if (w2y == -half) continue;
      const int y_lo = align_up(range_lo(w2y)), y_hi = range_hi(w2y);
      for (int f2z = 0; f2z < m; ++f2z) {
        const int w2z = f2z < half ? f2z : f2z - m;
        if (w2z == -half) continue;
        const int z_lo = align_up(range_lo(w2z)), z_hi = range_hi(w2z);
        const int q2 = w2x * w2x + w2y * w2y + w2z * w2z;
        const double* krow = &kv[static_cast<std::size_t>(qidx[q2]) * nq];
        cplx acc(0.0, 0.0);
        for (int w1x = x_lo; w1x <= x_hi; w1x += stride) {
          const int fsx = (w1x + w2x + m) % m;
          const int fdx = (w2x - w1x + m) % m;
          const int qx = w1x * w1x;
          for (int w1y = y_lo; w1y <= y_hi; w1y += stride) {
            const int fsy = (w1y + w2y + m) % m;
            const int fdy = (w2y - w1y + m) % m;
            const int qxy = qx + w1y * w1y;
            const std::size_t base_s = (static_cast<std::size_t>(fsx) * m + fsy) * m;
            const std::size_t base_d = (static_cast<std::size_t>(fdx) * m + fdy) * m;
            for (int w1z = z_lo; w1z <= z_hi; w1z += stride) {
              const int fsz = (w1z + w2z + m) % m;
              const int fdz = (w2z - w1z + m) % m;
              const double kern = krow[qidx[qxy + w1z * w1z]];
              acc += kern * v1.c[base_s + fsz] * v2.c[base_d + fdz];
            }
          }
        }
        beta.at(f2x, f2y, f2z) = acc * cell;
      }
    }
  });
  return beta;
}

GridField b2_output_from_beta(const SpectralField& beta) {
  const int m = beta.m;
  const double L = beta.box_halfwidth;
  const double d = beta.dual_spacing();
  GridField out(m, L);

  // per-axis phase matrix e^{2 i x_j xi_k}
  std::vector<cplx> E(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    const double x = -L + j * (2.0 * L / m);
    for (int f = 0; f < m; ++f) {
      const double xi = d * (f < m / 2 ? f : f - m);
      E[static_cast<std::size_t>(j) * m + f] = std::exp(cplx(0.0, 2.0 * x * xi));
    }
  }

  const std::size_t mm = static_cast<std::size_t>(m) * m;
  std::vector<cplx> t0(static_cast<std::size_t>(m) * mm), t1(static_cast<std::size_t>(m) * mm);
  // contract x axis
  for_each_chunk(m, [&](std::size_t j) {
    for (std::size_t yz = 0; yz < mm; ++yz) {
      cplx acc(0.0, 0.0);
      for (int f = 0; f < m; ++f) acc += E[j * m + f] * beta.c[static_cast<std::size_t>(f) * mm + yz];
      t0[j * mm + yz] = acc;
    }
  });
  // contract y axis
  for_each_chunk(m, [&](std::size_t j) {
    for (int jy = 0; jy < m; ++jy)
      for (int fz = 0; fz < m; ++fz) {
        cplx acc(0.0, 0.0);
        for (int f = 0; f < m; ++f)
          acc += E[static_cast<std::size_t>(jy) * m + f] * t0[j * mm + static_cast<std::size_t>(f) * m + fz];
        t1[j * mm + static_cast<std::size_t>(jy) * m + fz] = acc;
      }
  });
  // contract z axis
  const double scale = 8.0 * std::pow(2.0 * kPi, -6.0) * d * d * d;
  for_each_chunk(m, [&](std::size_t j) {
    for (int jy = 0; jy < m; ++jy)
      for (int jz = 0; jz < m; ++jz) {
        cplx acc(0.0, 0.0);
        for (int f = 0; f < m; ++f)
          acc += E[static_cast<std::size_t>(jz) * m + f] * t1[j * mm + static_cast<std::size_t>(jy) * m + f];
        out.a[j * mm + static_cast<std::size_t>(jy) * m + jz] = acc * scale;
      }
  });
  return out;
}

namespace {

void check_lattice_resolution(const SpectralField& s) {
  // mass of |vhat|^2 on the outermost index shell vs total
  const int m = s.m;
  const int half = m / 2;
  double edge = 0.0, total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double v = std::norm(s.at(i, j, k));
        total += v;
        const int wi = std::abs(s.wrap(i)), wj = std::abs(s.wrap(j)), wk = std::abs(s.wrap(k));
        if (std::max({wi, wj, wk}) >= half - 1) edge += v;
      }
  if (total > 0.0 && edge / total > 0.05)
    throw LatticeTooCoarse("more than 5% of spectral mass on the lattice edge");
}

BornTermResult b2_pair_impl(const GridPotential& v1, const GridPotential& v2,
                            const TruncatedKernel& k, bool enforce_radius) {
  const auto t0 = std::chrono::steady_clock::now();
  const double R = std::max(v1.support_radius, v2.support_radius);
  if (enforce_radius && k.radius < 2.0 * R - 1e-12)
    throw ConfigError("b2_fourier: kernel radius must be at least 2 * support radius");
  SpectralField s1 = spectral_forward(v1.field);
  check_lattice_resolution(s1);
  SpectralField s2 = (&v1 == &v2) ? s1 : spectral_forward(v2.field);
  if (&v1 != &v2) check_lattice_resolution(s2);

  SpectralField beta = b2_beta_lattice(s1, s2, k, 1);
  BornTermResult res;
  res.order = 2;
  res.method = "fourier_grid";
  res.field = b2_output_from_beta(beta);

  SpectralField beta_half = b2_beta_lattice(s1, s2, k, 2);
  GridField coarse = b2_output_from_beta(beta_half);
  double emax = 0.0;
  for (std::size_t i = 0; i < coarse.a.size(); ++i)
    emax = std::max(emax, std::abs(res.field.a[i] - coarse.a[i]));
  res.error_estimate = emax;
  res.elapsed_seconds = seconds_since(t0);
  return res;
}

}  // namespace

BornTermResult b2_fourier(const GridPotential& v, const TruncatedKernel& k) {
  return b2_pair_impl(v, v, k, true);
}

// bilinear form B_{2,R}(v1, v2); any cutoff radius is meaningful here
BornTermResult b2_fourier_pair(const GridPotential& v1, const GridPotential& v2,
                               const TruncatedKernel& k) {
  return b2_pair_impl(v1, v2, k, false);
}

double sobolev_norm(const GridField& f, double s) {
  SpectralField sf = spectral_forward(f);
  const int m = sf.m;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    double plane = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double r = sf.xi_norm(i, j, k);
        plane += std::pow(1.0 + r * r, s) * std::norm(sf.at(i, j, k));
      }
    total += plane;
  }
  return std::sqrt(total * sf.dual_cell_volume() / std::pow(2.0 * kPi, 3));
}

double local_sobolev(const GridField& f, double s, double R) {
  if (!(R < 0.5 * f.box_halfwidth))
    throw ConfigError("local_sobolev requires R < L/2");
  GridField g = f;
  const int m = f.m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double x = f.coord(i), y = f.coord(j), z = f.coord(k);
        g.at(i, j, k) *= smooth_radial_window(std::sqrt(x * x + y * y + z * z), R);
      }
  return sobolev_norm(g, s);
}

std::vector<ShellAverage> radial_average_abs(const SpectralField& f, double bin_width) {
  const double bw = bin_width > 0.0 ? bin_width : 0.5 * f.dual_spacing();
  const int m = f.m;
  const double rmax = std::sqrt(3.0) * f.dual_spacing() * (m / 2);
  const int nb = static_cast<int>(rmax / bw) + 2;
  std::vector<double> sum(nb, 0.0);
  std::vector<long> cnt(nb, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double r = f.xi_norm(i, j, k);
        const int b = static_cast<int>(r / bw);
        if (b < nb) {
          sum[b] += std::abs(f.at(i, j, k));
          ++cnt[b];
        }
      }
  std::vector<ShellAverage> out;
  for (int b = 0; b < nb; ++b)
    if (cnt[b] > 0) out.push_back({(b + 0.5) * bw, sum[b] / cnt[b], cnt[b]});
  return out;
}

double fit_loglog_slope(const std::vector<ShellAverage>& shells, double lo, double hi,
                        int min_bins) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& s : shells) {
    if (s.radius < lo || s.radius > hi || s.mean_abs <= 0.0) continue;
    const double x = 0.5 * std::log(1.0 + s.radius * s.radius);
    const double y = std::log(s.mean_abs);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < min_bins) throw FitFailed("tail window has fewer bins than required");
  const double det = n * sxx - sx * sx;
  if (det <= 0.0) throw FitFailed("degenerate tail window");
  return (n * sxy - sx * sy) / det;
}

SmoothingReport smoothing_report(const GridPotential& v, const TruncatedKernel& k, double s,
                                 double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("smoothing_report: eps in (0,1)");
  SpectralField vhat = spectral_forward(v.field);
  SpectralField beta = b2_beta_lattice(vhat, vhat, k, 1);

  const double omega = vhat.dual_spacing() * (vhat.m / 2);
  auto shells_v = radial_average_abs(vhat);
  auto shells_b = radial_average_abs(beta);
  // the B_2 spectrum lives at doubled frequency: relabel the beta shells.
  // Beyond |xi_2| ~ omega/2 the lattice clips the dominant xi_1 ~ xi_2
  // contributions (xi_1 + xi_2 leaves the box), so the fit window stays
  // below that; both fits then share the output-frequency window
  // [0.4 omega, 0.9 omega].
  for (auto& sh : shells_b) sh.radius *= 2.0;
  const double w_lo = 0.4 * omega, w_hi = 0.9 * omega;

  SmoothingReport rep;
  {
    int n = 0;
    for (const auto& sh : shells_v)
      if (sh.radius >= w_lo && sh.radius <= w_hi) ++n;
    rep.bins_v = n;
  }
  {
    int n = 0;
    for (const auto& sh : shells_b)
      if (sh.radius >= w_lo && sh.radius <= w_hi) ++n;
    rep.bins_b2 = n;
  }
  rep.tail_exponent_v = -fit_loglog_slope(shells_v, w_lo, w_hi, 8);
  rep.tail_exponent_b2 = -fit_loglog_slope(shells_b, w_lo, w_hi, 8);
  rep.gain = rep.tail_exponent_b2 - rep.tail_exponent_v;
  rep.target_gain = std::min(s, 1.0 - epsilon);
  rep.pass_threshold = rep.target_gain - 0.3;
  rep.pass = rep.gain >= rep.pass_threshold;
  return rep;
}

std::vector<double> radial_fourier_profile(const std::vector<double>& r,
                                           const std::vector<double>& f,
                                           const std::vector<double>& rho) {
  if (r.size() != f.size() || r.size() < 3)
    throw ConfigError("radial_fourier_profile: bad sample arrays");
  std::vector<double> out(rho.size(), 0.0);
  const std::size_t n = r.size();
  for (std::size_t q = 0; q < rho.size(); ++q) {
    const double p = rho[q];
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      auto g = [&](double rr, double ff) {
        const double sp = p * rr;
        const double sinc = sp == 0.0 ? 1.0 : std::sin(sp) / sp;
        return ff * rr * rr * sinc;
      };
      acc += 0.5 * (r[i + 1] - r[i]) * (g(r[i], f[i]) + g(r[i + 1], f[i + 1]));
    }
    out[q] = 4.0 * kPi * acc;
  }
  return out;
}

double radial_sobolev_norm(const std::vector<double>& rho, const std::vector<double>& fhat,
                           double s) {
  if (rho.size() != fhat.size() || rho.size() < 3)
    throw ConfigError("radial_sobolev_norm: bad sample arrays");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
    auto g = [&](double p, double v) {
      return std::pow(1.0 + p * p, s) * v * v * p * p;
    };
    acc += 0.5 * (rho[i + 1] - rho[i]) * (g(rho[i], fhat[i]) + g(rho[i + 1], fhat[i + 1]));
  }
  return std::sqrt(acc * 4.0 * kPi / std::pow(2.0 * kPi, 3));
}

}  // namespace bsc

#include "bsc/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "bsc/errors.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GridField::GridField(int m_, double L) : m(m_), box_halfwidth(L) {
  if (m < 8 || m % 2 != 0) throw ConfigError("GridField: m must be even and >= 8");
  if (!(L > 0.0)) throw ConfigError("GridField: box halfwidth must be positive");
  a.assign(static_cast<std::size_t>(m) * m * m, cplx(0.0, 0.0));
}

void GridField::fill(const std::function<cplx(const Vec3&)>& f) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) at(i, j, k) = f({coord(i), coord(j), coord(k)});
}

double SpectralField::dual_spacing() const { return kPi / box_halfwidth; }
double SpectralField::dual_cell_volume() const {
  const double d = dual_spacing();
  return d * d * d;
}

double SpectralField::xi_norm(int i, int j, int k) const {
  const double x = xi_component(i), y = xi_component(j), z = xi_component(k);
  return std::sqrt(x * x + y * y + z * z);
}

namespace {

std::mutex g_plan_mutex;

fftw_plan get_plan(int m, int direction) {
  static std::map<std::pair<int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(m, direction);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(m) * m * m);
  fftw_complex* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_3d(m, m, m, p, p,
                                    direction < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_raw(std::vector<cplx>& data, int m, int direction) {
  fftw_plan plan = get_plan(m, direction);
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

SpectralField spectral_forward(const GridField& f) {
  SpectralField s;
  s.m = f.m;
  s.box_halfwidth = f.box_halfwidth;
  s.c = f.a;
  fft_raw(s.c, f.m, -1);
  // phase from the grid starting at -L, plus the cell volume
  const double vol = f.cell_volume();
  const int m = f.m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double sign = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;
        s.at(i, j, k) *= sign * vol;
      }
  return s;
}

GridField spectral_inverse(const SpectralField& s) {
  GridField f(s.m, s.box_halfwidth);
  f.a = s.c;
  const int m = s.m;
  const double scale = s.dual_cell_volume() / std::pow(2.0 * kPi, 3);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double sign = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;
        f.at(i, j, k) *= sign * scale;
      }
  fft_raw(f.a, m, +1);
  return f;
}

void apply_radial_multiplier(GridField& f, const std::function<cplx(double)>& multiplier) {
  const int m = f.m;
  fft_raw(f.a, m, -1);
  const double inv = 1.0 / (static_cast<double>(m) * m * m);
  const double d = kPi / f.box_halfwidth;
  std::vector<double> comp(m);
  for (int i = 0; i < m; ++i) comp[i] = d * (i < m / 2 ? i : i - m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double xy2 = comp[i] * comp[i] + comp[j] * comp[j];
      cplx* row = &f.a[(static_cast<std::size_t>(i) * m + j) * m];
      for (int k = 0; k < m; ++k)
        row[k] *= multiplier(std::sqrt(xy2 + comp[k] * comp[k])) * inv;
    }
  fft_raw(f.a, m, +1);
}

double l2_norm(const GridField& f) {
  // plane-ordered accumulation keeps the reduction deterministic
  double total = 0.0;
  const int m = f.m;
  for (int i = 0; i < m; ++i) {
    double plane = 0.0;
    const cplx* p = &f.a[static_cast<std::size_t>(i) * m * m];
    for (int jk = 0; jk < m * m; ++jk) plane += std::norm(p[jk]);
    total += plane;
  }
  return std::sqrt(total * f.cell_volume());
}

double linf_norm(const GridField& f) {
  double mx = 0.0;
  for (const cplx& v : f.a) mx = std::max(mx, std::abs(v));
  return mx;
}

void axpy(GridField& y, cplx alpha, const GridField& x) {
  if (y.m != x.m) throw ConfigError("axpy: incompatible grids");
  for (std::size_t i = 0; i < y.a.size(); ++i) y.a[i] += alpha * x.a[i];
}

void scale(GridField& f, cplx alpha) {
  for (auto& v : f.a) v *= alpha;
}

}  // namespace bsc

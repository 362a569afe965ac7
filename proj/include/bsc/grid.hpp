#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bsc/fundamental.hpp"

namespace bsc {

using cplx = std::complex<double>;

// Complex samples on the periodic cube [-L, L)^3, m points per axis,
// x_j = -L + j * (2L/m). Layout (ix*m + iy)*m + iz, z contiguous.
struct GridField {
  int m = 0;
  double box_halfwidth = 0.0;
  std::vector<cplx> a;

  GridField() = default;
  GridField(int m_, double L);

  double spacing() const { return 2.0 * box_halfwidth / m; }
  double cell_volume() const { double h = spacing(); return h * h * h; }
  double coord(int j) const { return -box_halfwidth + j * spacing(); }
  std::size_t size() const { return a.size(); }
  cplx& at(int i, int j, int k) { return a[(static_cast<std::size_t>(i) * m + j) * m + k]; }
  const cplx& at(int i, int j, int k) const {
    return a[(static_cast<std::size_t>(i) * m + j) * m + k];
  }

  void fill(const std::function<cplx(const Vec3&)>& f);
};

// Coefficients on the dual lattice (pi/L) {-m/2, ..., m/2-1}^3, stored in
// FFTW (wrapped) index order and normalized so that c[k] approximates the
// continuum transform integral f(x) e^{-i<xi_k, x>} dx.
struct SpectralField {
  int m = 0;
  double box_halfwidth = 0.0;
  std::vector<cplx> c;

  double dual_spacing() const;                       // pi / L
  double dual_cell_volume() const;                   // (pi/L)^3
  int wrap(int kf) const { return kf < m / 2 ? kf : kf - m; }
  double xi_component(int kf) const { return dual_spacing() * wrap(kf); }
  double xi_norm(int i, int j, int k) const;
  cplx& at(int i, int j, int k) { return c[(static_cast<std::size_t>(i) * m + j) * m + k]; }
  const cplx& at(int i, int j, int k) const {
    return c[(static_cast<std::size_t>(i) * m + j) * m + k];
  }
};

// Unnormalized in-place 3-d FFT (cached FFTW plans, deterministic).
void fft_raw(std::vector<cplx>& data, int m, int direction);  // direction: -1 fwd, +1 bwd

SpectralField spectral_forward(const GridField& f);
GridField spectral_inverse(const SpectralField& s);

// g <- multiplier(|xi|) applied in the Fourier domain (phases cancel, so the
// raw transform is used). multiplier receives |xi| >= 0.
void apply_radial_multiplier(GridField& f, const std::function<cplx(double)>& multiplier);

double l2_norm(const GridField& f);          // sqrt(sum |f|^2 h^3)
double linf_norm(const GridField& f);
void axpy(GridField& y, cplx alpha, const GridField& x);  // y += alpha x
void scale(GridField& f, cplx alpha);

}  // namespace bsc

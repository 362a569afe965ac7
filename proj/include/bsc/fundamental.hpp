#pragma once

#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "bsc/kernel_table.hpp"
#include "bsc/special_kernels.hpp"

namespace bsc {

using Vec3 = std::array<double, 3>;

inline double norm3(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

struct FrequencyTuple {
  std::vector<Vec3> xi;
};

// Time-cutoff kernel of a given order and cutoff radius. Evaluation goes
// through the kernel table when one is attached and falls back to direct
// quadrature when allowed.
struct TruncatedKernel {
  int order = 2;
  double radius = 1.0;  // cutoff scale R (length units)
  const KernelTable* table = nullptr;
  bool on_demand = true;
  QuadratureSpec quad;

  TruncatedKernel(int n, double r) : order(n), radius(r) {}
};

// Fourier transform of the cutoff kernel at a frequency tuple:
//   R^{2N-2} F_N(R|xi_1|, ..., R|xi_N|).
std::complex<double> fourier_E(const TruncatedKernel& k, const FrequencyTuple& xi);

// Same, taking the moduli directly (the transform is rotation invariant in
// each slot).
std::complex<double> fourier_E_radii(const TruncatedKernel& k, const RadialTuple& moduli);

// prod_{j<N}(r_N^2 - r_j^2) * (-1)^{N-1} * F(r; sigma) for each sigma in the
// (decreasing positive) sequence. Converges to 1 as sigma -> 0 when the
// kernel transform behaves like the reciprocal symbol of P_N.
std::vector<std::complex<double>> pv_product(int n_order, const RadialTuple& r,
                                             const std::vector<double>& sigma_seq);

// Fourier-side check of the kernel recursion: the pair
//   ( (r_N^2 - r_{N-1}^2) (-1)^{N-1} F(r_1..r_N; sigma),
//     (-1)^{N-2} F(r_1..r_{N-2}, r_N; sigma) )
// agrees in the sigma -> 0 limit.
std::pair<std::complex<double>, std::complex<double>> recursion_check(int n_order,
                                                                      const RadialTuple& r,
                                                                      double sigma);

// Test function on R^3 x R^3 paired against the ultra-hyperbolic fundamental
// solution. Either a pointwise evaluator or a precomputed normalized double
// spherical mean can be supplied; the mean takes precedence when set.
struct PairFunction {
  std::function<double(const Vec3&, const Vec3&)> eval;
  std::function<double(double, double)> radial_mean;  // hat g(s, t)
  double radius = 8.0;    // t-integration range (decay/support radius)
  int angular_order = 16; // polar order of the product sphere rule
};

// <E_2, g> for n = 3, where E_2 = -(4 pi^2)^{-1} delta'(|x|^2 - |y|^2):
// reduces to a 1-d integral of a radial derivative of the double spherical
// mean; the derivative is taken by central differences with Richardson
// extrapolation. Evaluations stay on the cone |x| = |y| up to the
// differencing step, so cone-avoiding test functions give an exact zero.
double e2_pair(const PairFunction& g, const QuadratureSpec& q);

}  // namespace bsc

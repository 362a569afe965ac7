#pragma once

#include <complex>
#include <vector>

#include "bsc/errors.hpp"

namespace bsc {

// Ordered tuple of nonnegative frequency radii (r_1, ..., r_N) indexing the
// rotation-invariant kernels. Only the squares of the entries ever enter the
// formulas, so radii are stored nonnegative.
struct RadialTuple {
  std::vector<double> radii;

  RadialTuple() = default;
  RadialTuple(std::initializer_list<double> r);
  explicit RadialTuple(std::vector<double> r);

  std::size_t size() const { return radii.size(); }
  double operator[](std::size_t i) const { return radii[i]; }
  double max_radius() const;
};

// Laplace shift with positive real part (inverse-time units). Distinct from
// the Sobolev exponent sigma used by the bounds module.
struct ComplexShift {
  std::complex<double> sigma;
  explicit ComplexShift(std::complex<double> s);
};

// Smooth cutoff chi_{N,R}: identically 1 on |t| <= R, supported in |t| <= 2R,
// built as the indicator of [-3R/2, 3R/2] mollified by 2N+2 boxes of
// half-width R*h, h = 1/(4(N+1)). Derivatives satisfy
// |chi^(k)| <= (4(N+1)/R)^k <= (8N/R)^k for k <= 2N+2.
struct CutoffSpec {
  int order;                  // N >= 2
  double scale;               // R > 0
  double mollifier_halfwidth; // h = 1/(4(N+1)), in units of the scale

  CutoffSpec(int n, double r);
};

enum class QuadRule { gauss, adaptive, trapezoid };

struct QuadratureSpec {
  QuadRule rule = QuadRule::adaptive;
  long max_subdivisions = 20000;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  // max panel width as a fraction of pi / max(radii)
  double oscillation_guard = 0.25;
};

// phi_a(t) = H(t) sin(t a)/a, with the a -> 0 limit t H(t).
double phi(double a, double t);

// Separation threshold below which squared radii count as degenerate.
double radii_separation_threshold(const RadialTuple& a);

// Closed form of the convolution chain phi_{a_1} * ... * phi_{a_N} at t:
//   sum_j prod_{k != j} (a_k^2 - a_j^2)^{-1} phi_{a_j}(t).
// Requires pairwise separated squares; throws NearDegenerateRadii otherwise.
double phi_conv_closed(const RadialTuple& a, double t);

// Same value as phi_conv_closed but defined for arbitrary radii: clustered
// squares are evaluated by symmetric perturbation of the closed form with
// quadratic extrapolation in the perturbation size.
double phi_conv_stable(const RadialTuple& a, double t);

// F(a_1,...,a_N; sigma) = int_0^inf (phi_{a_1} * ... * phi_{a_{N-1}})(t)
//                         cos(t a_N) e^{-sigma t} dt,  N >= 2.
std::complex<double> laplace_F_direct(const RadialTuple& a, const ComplexShift& sigma,
                                      const QuadratureSpec& q);

// Closed form:
//   1/2 ( prod_{j<N} (a_j^2 - (a_N - i sigma)^2)^{-1}
//       + prod_{j<N} (a_j^2 - (a_N + i sigma)^2)^{-1} ).
std::complex<double> laplace_F_closed(const RadialTuple& a, const ComplexShift& sigma);

// Exact evaluation of the cutoff chi_{N,R} at t.
double chi(const CutoffSpec& spec, double t);

// Exact k-th derivative of the cutoff, 0 <= k <= 2N+2.
double chi_derivative(const CutoffSpec& spec, int k, double t);

// h_gamma(r, s) = (gamma + |r-s|)^{-1} (gamma + |r+s|)^{-1}.
double h_gamma(double gamma, double r, double s);

// Radial profile of the transformed unit-cutoff kernel:
//   F_N(r) = (-1)^{N-1} int_R (phi_{r_1} * ... * phi_{r_{N-1}})(t)
//            cos(t r_N) chi_N(t) dt.
// The integrand is real; the imaginary part of the result is exactly 0.
std::complex<double> f_n_eval(int n_order, const RadialTuple& r, const QuadratureSpec& q);

// Closed-form F_2: the cutoff is piecewise polynomial, so
//   F_2(r1, r2) = -(2 r1)^{-1} [ S(r1 + r2) + S(r1 - r2) ],
//   S(w) = int chi_2(t) sin(w t) dt,
// with S evaluated exactly per polynomial piece (series below w = 2).
// Agrees with f_n_eval(2, .) to machine precision and is ~20x faster.
double f2_exact(double r1, double r2);

// Same closed route for general order through the chain closed form; throws
// NearDegenerateRadii when the chain squares cluster (fall back to f_n_eval).
double fn_exact(int n_order, const RadialTuple& r);

// Stable cardinal B-spline of order m (degree m-1) on [0, m]; density of the
// sum of m independent U[0,1]. Exposed for the cutoff tests.
double cardinal_bspline(int m, double x);

// CDF of the sum of m independent U[0,1]; exact 0/1 clamping outside [0, m].
double irwin_hall_cdf(int m, double x);

}  // namespace bsc

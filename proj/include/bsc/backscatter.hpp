#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bsc/fundamental.hpp"
#include "bsc/potentials.hpp"

namespace bsc {

struct BornTermResult {
  int order = 2;
  std::string method;  // fourier_grid | radial_quad | radial_mc
  GridField field;     // grid methods
  std::vector<double> radial_radii;
  std::vector<double> radial_values;
  std::vector<double> radial_std_err;  // Monte-Carlo only
  double error_estimate = 0.0;         // absolute scale of the method error
  double elapsed_seconds = 0.0;
  long mc_samples = 0;
};

// beta(xi_2) on the dual lattice:
//   sum_{xi_1} FE(xi_1, xi_2) vhat1(xi_1 + xi_2) vhat2(xi_2 - xi_1) dcell.
// Out-of-lattice shifts are dropped. stride > 1 subsamples the xi_1 lattice
// (used for the half-lattice error probe). Kernel values are deduplicated
// over the distinct lattice radius pairs before the sum.
SpectralField b2_beta_lattice(const SpectralField& v1, const SpectralField& v2,
                              const TruncatedKernel& k, int stride = 1);

// output(x) = (2 pi)^{-6} 2^3 sum_{xi_2} e^{2 i <x, xi_2>} beta(xi_2) dcell,
// assembled by direct per-axis summation at the grid points.
GridField b2_output_from_beta(const SpectralField& beta);

// Quadratic term of the transform on a grid potential; error estimate from a
// half-lattice rerun of the xi_1 sum.
BornTermResult b2_fourier(const GridPotential& v, const TruncatedKernel& k);

// Bilinear extension B_2(v1, v2) for the polarization and bound checks.
BornTermResult b2_fourier_pair(const GridPotential& v1, const GridPotential& v2,
                               const TruncatedKernel& k);

// Physical-space evaluation of B_2 v at chosen points via the delta'
// pairing with g_x(y1, y2) = v(x - (y1+y2)/2) v(x - (y2-y1)/2). The
// potential must carry an analytic evaluator. When error_estimates is given
// it receives an angular-refinement difference per point.
std::vector<double> b2_physical(const GridPotential& v, const std::vector<Vec3>& points,
                                const QuadratureSpec& q, int angular_order = 16,
                                std::vector<double>* error_estimates = nullptr);

// Deterministic radial pipeline for rotation-invariant potentials: the
// xi_1 integral reduces to (r_1, u) quadrature per |xi_2| node, then a 1-d
// spherical inverse transform to the output radii.
BornTermResult b2_radial_quad(const RadialPotential& v, const TruncatedKernel& k,
                              const std::vector<double>& out_radii, const QuadratureSpec& q);

struct McSettings {
  long samples = 20000;  // per beta node, spec floor 1e4
  std::uint64_t seed = 1;
  double gamma = 0.0;  // shell width; 0 -> N/(4R)
  double r_max = 0.0;  // importance ball radius; 0 -> derived from the profile
};

// Monte-Carlo B_N v for radial potentials, N in {2,3,4}: importance mixture
// of a uniform ball and a shell-Cauchy layer around |xi_N| per chain slot.
BornTermResult bn_radial(const RadialPotential& v, int n_order,
                         const std::vector<double>& out_radii, const McSettings& mc,
                         const TruncatedKernel& k, const QuadratureSpec& q);

enum class TermMethod { fourier_grid, radial_quad, radial_mc };

struct TransformResult {
  GridField field;
  std::vector<double> term_l2_norms;  // entry per N = 1..max_order
};

// v + sum_{N=2}^{max_order} B_N v on the grid.
TransformResult truncated_transform(const GridPotential& v, int max_order,
                                    const std::map<int, TermMethod>& methods,
                                    const TruncatedKernel& k, const QuadratureSpec& q);

struct RadialTransformResult {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<std::vector<double>> terms;  // per N = 1..max_order
  std::vector<double> term_norms;          // sup norms of the radial terms
};

RadialTransformResult radial_truncated_transform(const RadialPotential& v, int max_order,
                                                 const std::map<int, TermMethod>& methods,
                                                 const std::vector<double>& out_radii,
                                                 const McSettings& mc, const QuadratureSpec& q);

// H_{(s)} norm: ((2 pi)^{-3} sum <xi>^{2s} |fhat|^2 dcell)^{1/2}; equals the
// L^2 norm at s = 0 by Parseval.
double sobolev_norm(const GridField& f, double s);

// Upper bound for the H_{(s)}(B(0,R)) quotient norm: the norm of f times a
// smooth bump that is 1 on B(0,R) and supported in B(0, 1.2R).
double local_sobolev(const GridField& f, double s, double R);

struct ShellAverage {
  double radius;
  double mean_abs;
  long count;
};
std::vector<ShellAverage> radial_average_abs(const SpectralField& f, double bin_width = 0.0);

// Least-squares slope of log(mean_abs) vs log<radius> over [lo, hi].
double fit_loglog_slope(const std::vector<ShellAverage>& shells, double lo, double hi,
                        int min_bins);

struct SmoothingReport {
  double tail_exponent_v = 0.0;   // fitted decay exponent of |vhat|
  double tail_exponent_b2 = 0.0;  // fitted decay exponent of the B_2 spectrum
  double gain = 0.0;              // difference of the two
  double target_gain = 0.0;       // min(s - m, 1 - eps), m = 0 here
  double pass_threshold = 0.0;    // target - 0.3
  bool pass = false;
  int bins_v = 0;
  int bins_b2 = 0;
};

// Fourier-tail smoothing check: fits the decay exponents of |vhat| and of
// the B_2 spectrum (read off the beta lattice at doubled frequency) and
// reports the measured gain.
SmoothingReport smoothing_report(const GridPotential& v, const TruncatedKernel& k, double s,
                                 double epsilon);

// Radial-profile Sobolev machinery (used by the scaling sweeps): forward
// spherical transform of a sampled radial function and the weighted norm.
std::vector<double> radial_fourier_profile(const std::vector<double>& r,
                                           const std::vector<double>& f,
                                           const std::vector<double>& rho);
double radial_sobolev_norm(const std::vector<double>& rho, const std::vector<double>& fhat,
                           double s);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace bsc

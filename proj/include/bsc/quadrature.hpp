#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace bsc {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
// Computed once per order and cached.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

// Fixed-panel Gauss-Legendre integration of f over [a, b] with panel width
// at most max_width, pts nodes per panel.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double max_width, int pts = 16);
std::complex<double> integrate_panels_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double max_width, int pts = 16);

// Panel integration with global refinement: panel widths are halved until
// two successive sweeps agree to rel_tol (plus abs_tol floor). Throws
// QuadratureBudgetExceeded when the panel count would exceed max_panels.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double initial_width, double rel_tol, double abs_tol,
                          long max_panels, int pts = 16);
std::complex<double> integrate_adaptive_c(const std::function<std::complex<double>(double)>& f,
                                          double a, double b, double initial_width,
                                          double rel_tol, double abs_tol, long max_panels,
                                          int pts = 16);

// Classic recursive adaptive Simpson; used where an independent second rule
// is wanted next to the Gauss panels.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 30);

// Product quadrature on the unit sphere S^2: Gauss-Legendre in cos(theta)
// crossed with a uniform azimuthal grid. Integrates spherical harmonics
// exactly up to degree min(2*n_polar - 1, n_azimuth - 1).
struct SphereRule {
  // unit directions and weights, sum of weights = 4*pi
  std::vector<std::array<double, 3>> dir;
  std::vector<double> w;
};
const SphereRule& sphere_rule(int n_polar);

// Mean value of f over the sphere of radius r (weights normalized by 4*pi).
double sphere_mean(const std::function<double(const std::array<double, 3>&)>& f, double r,
                   const SphereRule& rule);

}  // namespace bsc

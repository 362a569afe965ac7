#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "bsc/grid.hpp"

namespace bsc {

// Smooth radial window: 1 for r <= plateau, 0 for r >= 1.2*plateau, built
// from the order-3 cutoff.
double smooth_radial_window(double r, double plateau);

// Potential generator. Kinds:
//   gaussian    amplitude * exp(-|x|^2/width^2), truncated at support_radius
//   bump        amplitude * exp(1 - 1/(1 - (|x|/support_radius)^2))
//   trig_random windowed random low-frequency trig sum (seeded)
//   radial_tail spectral construction: vhat = amplitude <xi>^{-tail_exponent},
//               windowed in space to support_radius
struct PotentialSpec {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double width = 0.5;
  double support_radius = 2.0;
  double tail_exponent = 2.0;
  int modes = 2;
  std::uint64_t seed = 1;
};

struct GridPotential {
  GridField field;
  double support_radius = 1.0;
  double sobolev_s = 0.0;  // claimed regularity exponent
  // analytic evaluator when the kind admits one (empty for radial_tail)
  std::function<double(const Vec3&)> eval;
  // set for rotation-invariant kinds; enables reduced spherical means
  std::function<double(double)> radial_eval;
};

GridPotential make_grid_potential(const PotentialSpec& spec, int m, double box_halfwidth);

// Rotation-invariant potential carried by its radial Fourier profile.
struct RadialPotential {
  std::function<double(double)> fourier_profile;  // vhat(rho)
  double support_radius = 1.0;
  double profile_decay_radius = 8.0;  // |vhat| negligible beyond this
};

// Radial Gaussian amplitude * exp(-|x|^2/width^2):
//   vhat(rho) = amplitude pi^{3/2} width^3 exp(-width^2 rho^2 / 4).
RadialPotential make_radial_gaussian(double amplitude, double width, double support_radius);

// v(r) back from the radial profile: (2 pi^2)^{-1} int vhat(rho) rho^2
// sinc(rho r) d rho.
double radial_potential_value(const RadialPotential& v, double r);

}  // namespace bsc

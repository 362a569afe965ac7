#pragma once

#include "bsc/grid.hpp"

namespace bsc {

struct WaveState {
  GridField u;
  GridField u_dot;
  double time = 0.0;
};

// Free wave group: u(t) = sin(t|D|)/|D| f (the xi = 0 multiplier is t).
GridField free_propagate(const GridField& f, double t);

// Time derivative of the free group: multiplier cos(t|xi|).
GridField free_velocity(const GridField& f, double t);

// N-th Born iterate K_N(t) f of the wave group perturbed by the potential v:
//   K_0 = free group,  K_N(t) = int_0^t K_0(t-s) [v K_{N-1}(s)] ds.
// Composite Simpson in s on a shared grid of `steps` intervals (even,
// >= 4); all inner stages are computed once per level and reused.
GridField born_term(const GridField& v, const GridField& f, int n_order, double t, int steps);

// Full wave solve for Box u + v u = 0, u(0) = 0, u_t(0) = f, by Strang
// splitting with exact spectral free flights and potential kicks.
// Throws UnstableTimestep when dt >= 2/max|xi|.
WaveState wave_solve(const GridField& v, const GridField& f, double t, double dt);

// int |u_dot|^2 + |grad u|^2 (+ int v |u|^2 when v is supplied).
double free_energy(const WaveState& s);
double total_energy(const WaveState& s, const GridField& v);

}  // namespace bsc

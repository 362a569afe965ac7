#include <cmath>

#include "bsc/backscatter.hpp"
#include "bsc/parallel.hpp"
#include "bsc/quadrature.hpp"

namespace bsc {

namespace {

// For rotation-invariant v the double spherical mean of
//   g_x(y1, y2) = v(x - (y1+y2)/2) v(x - (y2-y1)/2)
// collapses to two nested 1-d angular integrals: with c = x - (t/2) w the
// two arguments share the center c, so the theta-mean depends on |c| only.
double radial_pair_mean(const std::function<double(double)>& vr, double x_mod, double s,
                        double t, int pts) {
  const GaussRule& g = gauss_legendre(pts);
  const double rho = 0.5 * s;
  double outer = 0.0;
  for (int i = 0; i < pts; ++i) {
    const double c2 =
        std::max(0.0, x_mod * x_mod + 0.25 * t * t - x_mod * t * g.x[i]);
    const double c = std::sqrt(c2);
    double inner = 0.0;
    for (int j = 0; j < pts; ++j) {
      const double qp = std::sqrt(std::max(0.0, c2 + rho * rho + 2.0 * c * rho * g.x[j]));
      const double qm = std::sqrt(std::max(0.0, c2 + rho * rho - 2.0 * c * rho * g.x[j]));
      inner += g.w[j] * vr(qm) * vr(qp);
    }
    outer += g.w[i] * 0.5 * inner;
  }
  return 0.5 * outer;
}

double e2_pair_at_order(const GridPotential& v, const Vec3& x, const QuadratureSpec& q,
                        int order) {
  PairFunction g;
  const double xr = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (v.radial_eval) {
    const auto vr = v.radial_eval;
    g.radial_mean = [vr, xr, order](double s, double t) {
      return radial_pair_mean(vr, xr, s, t, 2 * order);
    };
  } else {
    const auto& eval = v.eval;
    g.eval = [&eval, x](const Vec3& y1, const Vec3& y2) {
      const Vec3 a = {x[0] - 0.5 * (y1[0] + y2[0]), x[1] - 0.5 * (y1[1] + y2[1]),
                      x[2] - 0.5 * (y1[2] + y2[2])};
      const Vec3 b = {x[0] - 0.5 * (y2[0] - y1[0]), x[1] - 0.5 * (y2[1] - y1[1]),
                      x[2] - 0.5 * (y2[2] - y1[2])};
      return eval(a) * eval(b);
    };
    g.angular_order = order;
  }
  g.radius = 2.0 * (xr + v.support_radius) + 0.5;
  // hard-truncated potentials leave ~1e-7 kinks in the means; demanding more
  // of the t-quadrature than the angular error just burns the budget
  QuadratureSpec qq = q;
  qq.rel_tol = std::max(q.rel_tol, 1e-7);
  return e2_pair(g, qq);
}

}  // namespace

std::vector<double> b2_physical(const GridPotential& v, const std::vector<Vec3>& points,
                                const QuadratureSpec& q, int angular_order,
                                std::vector<double>* error_estimates) {
  if (!v.eval && !v.radial_eval)
    throw ConfigError("b2_physical needs a potential with an analytic evaluator");
  std::vector<double> out(points.size(), 0.0);
  std::vector<double> errs(points.size(), 0.0);
  const int step = v.radial_eval ? 8 : 4;
  for_each_chunk(points.size(), [&](std::size_t i) {
    const double coarse = e2_pair_at_order(v, points[i], q, angular_order);
    const double fine = e2_pair_at_order(v, points[i], q, angular_order + step);
    out[i] = fine;
    errs[i] = 1.5 * std::abs(fine - coarse);
  });
  if (error_estimates) *error_estimates = errs;
  return out;
}

}  // namespace bsc

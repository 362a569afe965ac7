#include "bsc/special_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

#include "bsc/quadrature.hpp"

namespace bsc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RadialTuple::RadialTuple(std::initializer_list<double> r) : radii(r) {
  if (radii.empty()) throw ConfigError("RadialTuple needs at least one radius");
  for (double v : radii)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("RadialTuple entries must be finite and >= 0");
}

RadialTuple::RadialTuple(std::vector<double> r) : radii(std::move(r)) {
  if (radii.empty()) throw ConfigError("RadialTuple needs at least one radius");
  for (double v : radii)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("RadialTuple entries must be finite and >= 0");
}

double RadialTuple::max_radius() const {
  return *std::max_element(radii.begin(), radii.end());
}

ComplexShift::ComplexShift(std::complex<double> s) : sigma(s) {
  if (!(s.real() > 0.0)) throw ConfigError("ComplexShift requires Re(sigma) > 0");
}

CutoffSpec::CutoffSpec(int n, double r) : order(n), scale(r) {
  if (n < 2) throw ConfigError("CutoffSpec order must be >= 2");
  if (!(r > 0.0)) throw ConfigError("CutoffSpec scale must be > 0");
  mollifier_halfwidth = 1.0 / (4.0 * (n + 1));
}

double phi(double a, double t) {
  if (t < 0.0) return 0.0;
  if (a == 0.0) return t;
  return std::sin(t * a) / a;
}

double radii_separation_threshold(const RadialTuple& a) {
  double bmax = 0.0;
  for (double v : a.radii) bmax = std::max(bmax, v * v);
  return 1e-4 * (1.0 + bmax);
}

namespace {

// sum_j prod_{k != j} (b_k - b_j)^{-1} phi_{sqrt(b_j)}(t) on squared radii
double conv_from_squares(const std::vector<double>& b, double t) {
  if (b.size() == 1) return phi(std::sqrt(b[0]), t);
  double s = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    double c = 1.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k == j) continue;
      c /= (b[k] - b[j]);
    }
    s += c * phi(std::sqrt(b[j]), t);
  }
  return s;
}

struct Cluster {
  std::vector<std::size_t> members;  // indices into the sorted square list
  double mean_radius = 0.0;
  double mean_square = 0.0;
};

}  // namespace

double phi_conv_closed(const RadialTuple& a, double t) {
  const std::size_t n = a.size();
  if (n == 1) return phi(a[0], t);
  const double thr = radii_separation_threshold(a);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = a[i] * a[i];
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      if (std::abs(b[j] - b[k]) < thr)
        throw NearDegenerateRadii("squared radii closer than separation threshold; use phi_conv_stable");
  if (t <= 0.0) return 0.0;
  return conv_from_squares(b, t);
}

double phi_conv_stable(const RadialTuple& a, double t) {
  const std::size_t n = a.size();
  if (t <= 0.0) return 0.0;
  if (n == 1) return phi(a[0], t);

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = a[i] * a[i];
  std::sort(sq.begin(), sq.end());

  const double thr = radii_separation_threshold(a);
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    if (clusters.empty() || sq[i] - sq[clusters.back().members.back()] >= thr)
      clusters.push_back({});
    clusters.back().members.push_back(i);
  }
  bool any_multi = false;
  for (auto& c : clusters) {
    double bs = 0.0;
    for (auto i : c.members) bs += sq[i];
    c.mean_square = bs / c.members.size();
    c.mean_radius = std::sqrt(c.mean_square);
    if (c.members.size() > 1) any_multi = true;
  }
  if (!any_multi) return conv_from_squares(sq, t);

  const double amax = a.max_radius();
  double delta = 1e-3 * (1.0 + amax);
  const double floor_gap = 1e-10 * (1.0 + sq.back());

  // Perturbed square list for a given perturbation size. Clusters away from
  // zero spread their radii symmetrically over mean + d*[-1, 1]; the values
  // are even in d, so the extrapolation below sees no odd error terms.
  // Near zero the +/- radii would collide in the squares, so those clusters
  // use sqrt-spaced radii 20 d sqrt(i+1), giving equally spaced squares.
  auto build = [&](double d) {
    std::vector<double> out;
    out.reserve(n);
    for (const auto& c : clusters) {
      const std::size_t m = c.members.size();
      if (m == 1) {
        out.push_back(sq[c.members[0]]);
        continue;
      }
      if (c.mean_radius <= 80.0 * d) {
        const double dz = 20.0 * d;
        for (std::size_t i = 0; i < m; ++i)
          out.push_back(c.mean_square + dz * dz * (i + 1.0));
      } else {
        for (std::size_t i = 0; i < m; ++i) {
          const double u = (2.0 * i - (m - 1.0)) / (m - 1.0);
          const double r = c.mean_radius + d * u;
          out.push_back(r * r);
        }
      }
    }
    return out;
  };
  auto min_gap = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < v.size(); ++i) g = std::min(g, v[i] - v[i - 1]);
    return g;
  };
  for (int tries = 0; tries < 20; ++tries) {
    if (min_gap(build(delta / 4.0)) >= floor_gap && min_gap(build(delta)) >= floor_gap) break;
    delta *= 0.5;
  }

  const double g1 = conv_from_squares(build(delta), t);
  const double g2 = conv_from_squares(build(delta / 2.0), t);
  const double g3 = conv_from_squares(build(delta / 4.0), t);
  // quadratic extrapolation through (delta, delta/2, delta/4) to 0
  return g1 / 3.0 - 2.0 * g2 + (8.0 / 3.0) * g3;
}

std::complex<double> laplace_F_direct(const RadialTuple& a, const ComplexShift& sigma,
                                      const QuadratureSpec& q) {
  const std::size_t n = a.size();
  if (n < 2) throw ConfigError("laplace_F_direct needs a tuple of length >= 2");
  RadialTuple chain(std::vector<double>(a.radii.begin(), a.radii.end() - 1));
  const double aN = a.radii.back();
  const double re = sigma.sigma.real();
  const double t_max = std::log(1.0 / std::max(q.abs_tol, 1e-300)) / re;
  double freq = std::max({a.max_radius(), std::abs(sigma.sigma.imag()), 1.0});
  const double width = q.oscillation_guard * kPi / freq;
  auto f = [&](double t) -> std::complex<double> {
    const double chain_v = phi_conv_stable(chain, t);
    return chain_v * std::cos(t * aN) * std::exp(-sigma.sigma * t);
  };
  return integrate_adaptive_c(f, 0.0, t_max, width, q.rel_tol, q.abs_tol, q.max_subdivisions);
}

std::complex<double> laplace_F_closed(const RadialTuple& a, const ComplexShift& sigma) {
  const std::size_t n = a.size();
  if (n < 2) throw ConfigError("laplace_F_closed needs a tuple of length >= 2");
  const double aN = a.radii.back();
  const std::complex<double> zm = aN - std::complex<double>(0, 1) * sigma.sigma;
  const std::complex<double> zp = aN + std::complex<double>(0, 1) * sigma.sigma;
  std::complex<double> pm = 1.0, pp = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double b = a.radii[j] * a.radii[j];
    pm /= (b - zm * zm);
    pp /= (b - zp * zp);
  }
  return 0.5 * (pm + pp);
}

double cardinal_bspline(int m, double x) {
  if (m < 1) throw ConfigError("cardinal_bspline order must be >= 1");
  if (m == 1) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
  if (x <= 0.0 || x >= m) return 0.0;
  const int k = static_cast<int>(std::floor(x));
  std::vector<double> val(m, 0.0);
  val[0] = 1.0;  // B_1(x - k)
  for (int q = 2; q <= m; ++q) {
    for (int i = q - 1; i >= 0; --i) {
      const double ti = (x - k) + i;
      const double lo = (i <= q - 2) ? val[i] : 0.0;
      const double hi = (i >= 1) ? val[i - 1] : 0.0;
      val[i] = (ti * lo + (q - ti) * hi) / (q - 1);
    }
  }
  return (k < m) ? val[k] : 0.0;
}

double irwin_hall_cdf(int m, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= m) return 1.0;
  // survival side is the small positive sum; use symmetry for accuracy
  if (x > 0.5 * m) return 1.0 - irwin_hall_cdf(m, m - x);
  double s = 0.0;
  for (int i = 0; i <= static_cast<int>(std::floor(x)); ++i)
    s += cardinal_bspline(m + 1, x - i);
  return s;
}

namespace {

// C_j(t) = (indicator_{[-3/2,3/2]} * box^{*j})(t) with box half-width h.
double smoothed_indicator(int j, double h, double t) {
  if (j == 0) {
    const double at = std::abs(t);
    if (at < 1.5) return 1.0;
    return at == 1.5 ? 0.5 : 0.0;
  }
  const double denom = 2.0 * h;
  const double y_hi = (t + 1.5 + j * h) / denom;
  const double y_lo = (t - 1.5 + j * h) / denom;
  if (y_lo >= j || y_hi <= 0.0) return 0.0;
  if (y_hi >= j && y_lo <= 0.0) return 1.0;
  return irwin_hall_cdf(j, y_hi) - irwin_hall_cdf(j, y_lo);
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double chi(const CutoffSpec& spec, double t) {
  const int m = 2 * spec.order + 2;
  return smoothed_indicator(m, spec.mollifier_halfwidth, t / spec.scale);
}

double chi_derivative(const CutoffSpec& spec, int k, double t) {
  const int m = 2 * spec.order + 2;
  if (k < 0 || k > m)
    throw DerivativeOrderTooHigh("chi derivative order must satisfy 0 <= k <= 2N+2");
  if (k == 0) return chi(spec, t);
  const double h = spec.mollifier_halfwidth;
  const double u = t / spec.scale;
  double s = 0.0;
  double sign = 1.0;
  for (int i = 0; i <= k; ++i) {
    s += sign * binomial(k, i) * smoothed_indicator(m - k, h, u + (k - 2 * i) * h);
    sign = -sign;
  }
  return s * std::pow(1.0 / (2.0 * h), k) * std::pow(1.0 / spec.scale, k);
}

double h_gamma(double gamma, double r, double s) {
  if (!(gamma > 0.0)) throw ConfigError("h_gamma requires gamma > 0");
  return 1.0 / ((gamma + std::abs(r - s)) * (gamma + std::abs(r + s)));
}

namespace {

// chi_N restricted to [1, 2]: 2N+2 polynomial pieces of width 1/(2(N+1)),
// degree <= 2N+2, in local coordinates x = t - t_lo. chi_N = 1 on [0, 1]
// and 0 beyond 2. Carries the closed per-piece sine/cosine transforms that
// turn F_N into a finite combination of 1-d evaluations.
struct ChiPieces {
  int pieces;
  int ncoef;  // piece degree + 1 (with one slack slot)
  double width;
  std::vector<double> t_lo;
  std::vector<std::vector<double>> coef;   // chi piece
  std::vector<std::vector<double>> tcoef;  // (t_lo + x) * piece
  std::vector<double> odd_moments;         // mu_{2q+1} = int_0^2 chi t^{2q+1} dt

  explicit ChiPieces(int n_order) {
    const CutoffSpec spec(n_order, 1.0);
    const int m = 2 * n_order + 2;
    pieces = m;
    ncoef = m + 2;
    width = 1.0 / (2.0 * (n_order + 1));
    t_lo.resize(pieces);
    coef.assign(pieces, std::vector<double>(ncoef, 0.0));
    tcoef.assign(pieces, std::vector<double>(ncoef + 1, 0.0));
    std::vector<double> xs(ncoef), dd(ncoef);
    for (int p = 0; p < pieces; ++p) {
      t_lo[p] = 1.0 + p * width;
      for (int i = 0; i < ncoef; ++i) {
        const double u = std::cos(kPi * (2.0 * i + 1.0) / (2.0 * ncoef));
        xs[i] = 0.5 * width * (1.0 + u);
        dd[i] = chi(spec, t_lo[p] + xs[i]);
      }
      for (int lev = 1; lev < ncoef; ++lev)
        for (int i = ncoef - 1; i >= lev; --i)
          dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - lev]);
      // Horner expansion of the Newton form into monomials in x
      double* c = coef[p].data();
      for (int i = ncoef - 1; i >= 0; --i) {
        for (int d = ncoef - 1; d >= 1; --d) c[d] = c[d - 1] - xs[i] * c[d];
        c[0] = -xs[i] * c[0] + dd[i];
      }
      tcoef[p][0] = t_lo[p] * c[0];
      for (int k = 1; k < ncoef; ++k) tcoef[p][k] = t_lo[p] * c[k] + c[k - 1];
      tcoef[p][ncoef] = c[ncoef - 1];
    }
    // odd moments for the small-w series, per-piece Gauss (exact for these degrees)
    odd_moments.resize(30);
    const GaussRule& g = gauss_legendre(48);
    for (int q = 0; q < 30; ++q) {
      const int pw = 2 * q + 1;
      double mom = 1.0 / (pw + 1);  // plateau [0,1]
      for (int p = 0; p < pieces; ++p) {
        double s = 0.0;
        for (int i = 0; i < 48; ++i) {
          const double x = 0.5 * width * (1.0 + g.x[i]);
          double val = 0.0;
          for (int k = ncoef - 1; k >= 0; --k) val = val * x + coef[p][k];
          s += g.w[i] * val * std::pow(t_lo[p] + x, pw);
        }
        mom += 0.5 * width * s;
      }
      odd_moments[q] = mom;
    }
  }

  // S(w) = int_0^2 chi(t) sin(w t) dt, w >= 0
  double sine_transform(double w) const {
    if (w < 4.0) {
      double term = w, s = 0.0;
      for (std::size_t q = 0; q < odd_moments.size(); ++q) {
        s += term * odd_moments[q];
        term *= -w * w / ((2.0 * q + 2.0) * (2.0 * q + 3.0));
        if (std::abs(term) < 1e-18) break;
      }
      return s;
    }
    double s = (1.0 - std::cos(w)) / w;  // plateau
    for (int p = 0; p < pieces; ++p) s += piece_integral(p, w, false);
    return s;
  }

  // C(w) = int_0^2 t chi(t) cos(w t) dt
  double cosine_t_transform(double w) const {
    w = std::abs(w);
    if (w < 4.0) {
      double term = 1.0, s = 0.0;
      for (std::size_t q = 0; q < odd_moments.size(); ++q) {
        s += term * odd_moments[q];
        term *= -w * w / ((2.0 * q + 1.0) * (2.0 * q + 2.0));
        if (std::abs(term) < 1e-18) break;
      }
      return s;
    }
    double s = std::sin(w) / w + (std::cos(w) - 1.0) / (w * w);  // plateau
    for (int p = 0; p < pieces; ++p) s += piece_integral(p, w, true);
    return s;
  }

 private:
  // with_t = false: int_0^W p(x) sin(w (t_lo + x)) dx
  // with_t = true:  int_0^W (t_lo + x) p(x) cos(w (t_lo + x)) dx
  double piece_integral(int p, double w, bool with_t) const {
    const double W = width;
    const int nk = with_t ? ncoef + 1 : ncoef;
    const double* a = with_t ? tcoef[p].data() : coef[p].data();
    // A_k = int x^k cos(w x), B_k = int x^k sin(w x) over [0, W]
    const double sw = std::sin(w * W), cw = std::cos(w * W);
    double A = sw / w;
    double B = (1.0 - cw) / w;
    double sa = a[0] * A, sb = a[0] * B;
    double wk = 1.0;
    for (int k = 1; k < nk; ++k) {
      wk *= W;
      const double Anew = wk * sw / w - (k / w) * B;
      const double Bnew = -wk * cw / w + (k / w) * A;
      A = Anew;
      B = Bnew;
      sa += a[k] * A;
      sb += a[k] * B;
    }
    const double c = std::cos(w * t_lo[p]), s = std::sin(w * t_lo[p]);
    return with_t ? (c * sa - s * sb) : (s * sa + c * sb);
  }
};

std::mutex g_pieces_mutex;

const ChiPieces& chi_pieces(int n_order) {
  static std::map<int, ChiPieces> cache;
  std::lock_guard<std::mutex> lock(g_pieces_mutex);
  auto it = cache.find(n_order);
  if (it == cache.end()) it = cache.emplace(n_order, ChiPieces(n_order)).first;
  return it->second;
}

}  // namespace

double f2_exact(double r1, double r2) {
  const ChiPieces& cp = chi_pieces(2);
  if (r1 < 1e-6) return -cp.cosine_t_transform(r2);
  auto S = [&](double w) { return w >= 0.0 ? cp.sine_transform(w) : -cp.sine_transform(-w); };
  return -(S(r1 + r2) + S(r1 - r2)) / (2.0 * r1);
}

double fn_exact(int n_order, const RadialTuple& r) {
  if (n_order < 2 || r.size() != static_cast<std::size_t>(n_order))
    throw ConfigError("fn_exact: radii count must equal the order >= 2");
  if (n_order == 2) return f2_exact(r[0], r[1]);
  // closed chain coefficients need separated squares; callers fall back to
  // the quadrature path on NearDegenerateRadii
  const std::size_t nc = r.size() - 1;
  std::vector<double> b(nc);
  for (std::size_t i = 0; i < nc; ++i) b[i] = r[i] * r[i];
  const double thr = radii_separation_threshold(r);
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t k = j + 1; k < nc; ++k)
      if (std::abs(b[j] - b[k]) < thr)
        throw NearDegenerateRadii("fn_exact: clustered chain squares");
  const ChiPieces& cp = chi_pieces(n_order);
  const double rn = r.radii.back();
  auto S = [&](double w) { return w >= 0.0 ? cp.sine_transform(w) : -cp.sine_transform(-w); };
  double acc = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    double cj = 1.0;
    for (std::size_t k = 0; k < nc; ++k)
      if (k != j) cj /= (b[k] - b[j]);
    const double aj = r[j];
    const double kern = aj < 1e-6 ? cp.cosine_t_transform(rn)
                                  : (S(aj + rn) + S(aj - rn)) / (2.0 * aj);
    acc += cj * kern;
  }
  const double sign = (n_order % 2 == 0) ? -1.0 : 1.0;
  return sign * acc;
}

std::complex<double> f_n_eval(int n_order, const RadialTuple& r, const QuadratureSpec& q) {
  if (n_order < 2) throw ConfigError("f_n_eval requires N >= 2");
  if (r.size() != static_cast<std::size_t>(n_order))
    throw ConfigError("f_n_eval: radii count must equal the order");
  RadialTuple chain(std::vector<double>(r.radii.begin(), r.radii.end() - 1));
  const double rN = r.radii.back();
  const CutoffSpec cut(n_order, 1.0);
  auto f = [&](double t) {
    return phi_conv_stable(chain, t) * std::cos(t * rN) * chi(cut, t);
  };
  const double freq = std::max(r.max_radius(), 1.0);
  const double width = std::min(0.25, q.oscillation_guard * kPi / freq);
  // chain vanishes for t <= 0 and the cutoff for t >= 2
  const double val =
      integrate_adaptive(f, 0.0, 2.0, width, q.rel_tol, q.abs_tol, q.max_subdivisions);
  const double sign = (n_order % 2 == 0) ? -1.0 : 1.0;
  return {sign * val, 0.0};
}

}  // namespace bsc

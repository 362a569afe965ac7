#include "bsc/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "bsc/errors.hpp"

namespace bsc {

namespace {

GaussRule compute_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = 3.14159265358979323846;
  // Newton iteration on P_n, Chebyshev-like initial guess
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0, p1;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

std::mutex g_rule_mutex;

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

template <typename T>
static T panels_impl(const std::function<T(double)>& f, double a, double b, double max_width,
                     int pts) {
  if (b <= a) return T{};
  long n = static_cast<long>(std::ceil((b - a) / max_width));
  if (n < 1) n = 1;
  const GaussRule& g = gauss_legendre(pts);
  const double h = (b - a) / n;
  T total{};
  for (long p = 0; p < n; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    T s{};
    for (int i = 0; i < pts; ++i) s += f(mid + 0.5 * h * g.x[i]) * g.w[i];
    total += s * (0.5 * h);
  }
  return total;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double max_width, int pts) {
  return panels_impl<double>(f, a, b, max_width, pts);
}

std::complex<double> integrate_panels_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double max_width, int pts) {
  return panels_impl<std::complex<double>>(f, a, b, max_width, pts);
}

template <typename T>
static T adaptive_impl(const std::function<T(double)>& f, double a, double b,
                       double initial_width, double rel_tol, double abs_tol, long max_panels,
                       int pts) {
  if (b <= a) return T{};
  double width = initial_width;
  if (width > b - a) width = b - a;
  T prev = panels_impl<T>(f, a, b, width, pts);
  for (;;) {
    width *= 0.5;
    long n = static_cast<long>(std::ceil((b - a) / width));
    if (n > max_panels)
      throw QuadratureBudgetExceeded("adaptive panel refinement exceeded max_subdivisions");
    T cur = panels_impl<T>(f, a, b, width, pts);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + abs_tol) return cur;
    prev = cur;
  }
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double initial_width, double rel_tol, double abs_tol,
                          long max_panels, int pts) {
  return adaptive_impl<double>(f, a, b, initial_width, rel_tol, abs_tol, max_panels, pts);
}

std::complex<double> integrate_adaptive_c(const std::function<std::complex<double>(double)>& f,
                                          double a, double b, double initial_width,
                                          double rel_tol, double abs_tol, long max_panels,
                                          int pts) {
  return adaptive_impl<std::complex<double>>(f, a, b, initial_width, rel_tol, abs_tol,
                                             max_panels, pts);
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

const SphereRule& sphere_rule(int n_polar) {
  const GaussRule& g = gauss_legendre(n_polar);  // before taking the cache lock
  static std::map<int, SphereRule> cache;
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = cache.find(n_polar);
  if (it != cache.end()) return it->second;

  const double pi = 3.14159265358979323846;
  SphereRule r;
  const int n_az = 2 * n_polar;
  r.dir.reserve(static_cast<std::size_t>(n_polar) * n_az);
  r.w.reserve(static_cast<std::size_t>(n_polar) * n_az);
  for (int i = 0; i < n_polar; ++i) {
    const double u = g.x[i];  // cos(theta)
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double wz = g.w[i] * (2.0 * pi / n_az);
    for (int j = 0; j < n_az; ++j) {
      const double phi = 2.0 * pi * j / n_az;
      r.dir.push_back({s * std::cos(phi), s * std::sin(phi), u});
      r.w.push_back(wz);
    }
  }
  return cache.emplace(n_polar, std::move(r)).first->second;
}

double sphere_mean(const std::function<double(const std::array<double, 3>&)>& f, double r,
                   const SphereRule& rule) {
  const double pi = 3.14159265358979323846;
  double s = 0.0;
  std::array<double, 3> p;
  for (std::size_t i = 0; i < rule.dir.size(); ++i) {
    p = {r * rule.dir[i][0], r * rule.dir[i][1], r * rule.dir[i][2]};
    s += rule.w[i] * f(p);
  }
  return s / (4.0 * pi);
}

}  // namespace bsc

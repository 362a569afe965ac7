#include <chrono>
#include <cmath>
#include <random>

#include "bsc/backscatter.hpp"
#include "bsc/parallel.hpp"
#include "bsc/quadrature.hpp"

namespace bsc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RadialNodes {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre panel nodes and weights on [0, hi]
RadialNodes panel_nodes(double hi, double width, int pts = 16) {
  RadialNodes out;
  const long n = std::max(1L, static_cast<long>(std::ceil(hi / width)));
  const GaussRule& g = gauss_legendre(pts);
  const double h = hi / n;
  for (long p = 0; p < n; ++p) {
    const double mid = (p + 0.5) * h;
    for (int i = 0; i < pts; ++i) {
      out.x.push_back(mid + 0.5 * h * g.x[i]);
      out.w.push_back(0.5 * h * g.w[i]);
    }
  }
  return out;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// spherical inverse transform of beta to the output radii:
//   B(r) = (2 pi)^{-3N} 2^3 4 pi int rho^2 beta(rho) sinc(2 r rho) d rho
void assemble_output(int n_order, const RadialNodes& nodes, const std::vector<double>& beta,
                     const std::vector<double>& beta_se, const std::vector<double>& out_radii,
                     std::vector<double>& values, std::vector<double>& std_err) {
  const double c = std::pow(2.0 * kPi, -3.0 * n_order) * 8.0 * 4.0 * kPi;
  values.assign(out_radii.size(), 0.0);
  std_err.assign(out_radii.size(), 0.0);
  for (std::size_t q = 0; q < out_radii.size(); ++q) {
    const double r = out_radii[q];
    double acc = 0.0, var = 0.0;
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double rho = nodes.x[i];
      const double wgt = nodes.w[i] * rho * rho * sinc(2.0 * r * rho);
      acc += wgt * beta[i];
      if (!beta_se.empty()) var += wgt * wgt * beta_se[i] * beta_se[i];
    }
    values[q] = c * acc;
    std_err[q] = c * std::sqrt(var);
  }
}

// deterministic beta(rho) for order 2 on a radial potential
double beta2_radial(const RadialPotential& v, const TruncatedKernel& k, double rho,
                    double r1_width, int u_pts) {
  const double r_cut = rho + v.profile_decay_radius;
  const RadialNodes r1n = panel_nodes(r_cut, r1_width);
  const GaussRule& gu = gauss_legendre(u_pts);
  double acc = 0.0;
  for (std::size_t i = 0; i < r1n.x.size(); ++i) {
    const double r1 = r1n.x[i];
    const double kern = fourier_E_radii(k, RadialTuple{{r1, rho}}).real();
    if (kern == 0.0) continue;
    double uin = 0.0;
    for (int j = 0; j < u_pts; ++j) {
      const double u = gu.x[j];
      const double qp = std::sqrt(std::max(0.0, r1 * r1 + rho * rho + 2.0 * r1 * rho * u));
      const double qm = std::sqrt(std::max(0.0, r1 * r1 + rho * rho - 2.0 * r1 * rho * u));
      uin += gu.w[j] * v.fourier_profile(qp) * v.fourier_profile(qm);
    }
    acc += r1n.w[i] * r1 * r1 * kern * uin;
  }
  return 2.0 * kPi * acc;
}

}  // namespace

BornTermResult b2_radial_quad(const RadialPotential& v, const TruncatedKernel& k,
                              const std::vector<double>& out_radii, const QuadratureSpec& q) {
  if (k.order != 2) throw ConfigError("b2_radial_quad: kernel order must be 2");
  const auto t0 = std::chrono::steady_clock::now();
  const double rho_max = 1.05 * v.profile_decay_radius;
  double r_out_max = 1.0;
  for (double r : out_radii) r_out_max = std::max(r_out_max, r);

  const double rho_width = std::min(0.35, kPi / (4.0 * 2.0 * r_out_max));
  const double r1_width = std::min(0.4, 0.4 * kPi / k.radius);

  auto run = [&](double rw, double r1w, int upts, std::vector<double>& vals,
                 RadialNodes& nodes) {
    nodes = panel_nodes(rho_max, rw);
    std::vector<double> beta(nodes.x.size(), 0.0);
    for_each_chunk(nodes.x.size(), [&](std::size_t i) {
      beta[i] = beta2_radial(v, k, nodes.x[i], r1w, upts);
    });
    std::vector<double> se;
    std::vector<double> dummy_se;
    assemble_output(2, nodes, beta, dummy_se, out_radii, vals, se);
  };

  BornTermResult res;
  res.order = 2;
  res.method = "radial_quad";
  res.radial_radii = out_radii;
  RadialNodes nodes;
  run(rho_width, r1_width, 16, res.radial_values, nodes);
  std::vector<double> coarse;
  RadialNodes nodes_c;
  run(1.5 * rho_width, 1.5 * r1_width, 12, coarse, nodes_c);
  double emax = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i)
    emax = std::max(emax, std::abs(res.radial_values[i] - coarse[i]));
  res.error_estimate = emax;
  res.elapsed_seconds = seconds_since(t0);
  (void)q;
  return res;
}

namespace {

struct MixtureSampler {
  double r_max;
  double rho;    // shell center
  double gamma;  // shell width
  double theta_lo, theta_span;

  MixtureSampler(double rmax, double center, double width)
      : r_max(rmax), rho(center), gamma(width) {
    theta_lo = std::atan((0.0 - rho) / gamma);
    theta_span = std::atan((r_max - rho) / gamma) - theta_lo;
  }

  // density of the radial modulus under the truncated Cauchy layer
  double cauchy_pdf(double r) const {
    if (r < 0.0 || r > r_max) return 0.0;
    const double z = (r - rho) / gamma;
    return 1.0 / (gamma * (1.0 + z * z) * theta_span);
  }

  double pdf(double r) const {
    const double ball = (r <= r_max) ? 3.0 / (4.0 * kPi * r_max * r_max * r_max) : 0.0;
    const double shell = (r > 0.0) ? cauchy_pdf(r) / (4.0 * kPi * r * r) : 0.0;
    return 0.5 * ball + 0.5 * shell;
  }

  Vec3 draw(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double r;
    if (uni(rng) < 0.5) {
      r = r_max * std::cbrt(uni(rng));
    } else {
      r = rho + gamma * std::tan(theta_lo + theta_span * uni(rng));
      r = std::min(std::max(r, 1e-12), r_max);
    }
    const double c = 2.0 * uni(rng) - 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double ph = 2.0 * kPi * uni(rng);
    return {r * s * std::cos(ph), r * s * std::sin(ph), r * c};
  }
};

}  // namespace

BornTermResult bn_radial(const RadialPotential& v, int n_order,
                         const std::vector<double>& out_radii, const McSettings& mc,
                         const TruncatedKernel& k, const QuadratureSpec& q) {
  if (n_order < 2 || n_order > 4) throw ConfigError("bn_radial supports N in {2,3,4}");
  if (k.order != n_order) throw ConfigError("bn_radial: kernel order mismatch");
  if (mc.samples < 10000) throw ConfigError("bn_radial needs at least 1e4 samples per node");
  const auto t0 = std::chrono::steady_clock::now();

  const double gamma = mc.gamma > 0.0 ? mc.gamma : n_order / (4.0 * v.support_radius);
  const double r_max = mc.r_max > 0.0 ? mc.r_max : 1.1 * v.profile_decay_radius;
  const double rho_max = 1.05 * v.profile_decay_radius;
  double r_out_max = 1.0;
  for (double r : out_radii) r_out_max = std::max(r_out_max, r);
  const double rho_width = std::min(0.5, kPi / (4.0 * 2.0 * r_out_max));
  const RadialNodes nodes = panel_nodes(rho_max, rho_width, 8);

  const int chain = n_order - 1;
  const long block = 2048;
  const long nblocks = (mc.samples + block - 1) / block;

  std::vector<double> beta(nodes.x.size(), 0.0), beta_se(nodes.x.size(), 0.0);
  for_each_chunk(nodes.x.size(), [&](std::size_t node) {
    const double rho = nodes.x[node];
    MixtureSampler sampler(r_max, rho, gamma);
    double sum = 0.0, sum2 = 0.0;
    long n = 0;
    for (long b = 0; b < nblocks; ++b) {
      std::mt19937_64 rng(splitmix64(mc.seed ^ splitmix64(node * 0x1000193ULL + b)));
      const long count = std::min(block, mc.samples - b * block);
      double bs = 0.0, bs2 = 0.0;
      for (long s = 0; s < count; ++s) {
        Vec3 xi[3];
        double dens = 1.0;
        for (int j = 0; j < chain; ++j) {
          xi[j] = sampler.draw(rng);
          dens *= sampler.pdf(norm3(xi[j]));
        }
        std::vector<double> radii(n_order);
        for (int j = 0; j < chain; ++j) radii[j] = norm3(xi[j]);
        radii[chain] = rho;
        const double kern = fourier_E_radii(k, RadialTuple(radii)).real();
        double val = kern;
        if (val != 0.0) {
          const Vec3 xiN = {0.0, 0.0, rho};
          // chain differences: xi_1 + xi_N, xi_2 - xi_1, ..., xi_N - xi_{N-1}
          Vec3 prev = xi[0];
          val *= v.fourier_profile(norm3({prev[0] + xiN[0], prev[1] + xiN[1], prev[2] + xiN[2]}));
          for (int j = 1; j < chain; ++j) {
            val *= v.fourier_profile(
                norm3({xi[j][0] - prev[0], xi[j][1] - prev[1], xi[j][2] - prev[2]}));
            prev = xi[j];
          }
          val *= v.fourier_profile(
              norm3({xiN[0] - prev[0], xiN[1] - prev[1], xiN[2] - prev[2]}));
          val /= dens;
        }
        bs += val;
        bs2 += val * val;
      }
      sum += bs;
      sum2 += bs2;
      n += count;
    }
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    beta[node] = mean;
    beta_se[node] = std::sqrt(var / n);
  });

  BornTermResult res;
  res.order = n_order;
  res.method = "radial_mc";
  res.radial_radii = out_radii;
  res.mc_samples = mc.samples;
  assemble_output(n_order, nodes, beta, beta_se, out_radii, res.radial_values,
                  res.radial_std_err);
  double vmax = 0.0, semax = 0.0;
  for (std::size_t i = 0; i < res.radial_values.size(); ++i) {
    vmax = std::max(vmax, std::abs(res.radial_values[i]));
    semax = std::max(semax, res.radial_std_err[i]);
  }
  res.error_estimate = semax;
  res.elapsed_seconds = seconds_since(t0);
  if (vmax > 0.0 && semax > 0.25 * vmax)
    throw InsufficientSamples("relative standard error above 25%");
  (void)q;
  return res;
}

TransformResult truncated_transform(const GridPotential& v, int max_order,
                                    const std::map<int, TermMethod>& methods,
                                    const TruncatedKernel& k, const QuadratureSpec& q) {
  if (max_order < 1) throw ConfigError("truncated_transform: max_order >= 1");
  TransformResult out;
  out.field = v.field;
  out.term_l2_norms.push_back(l2_norm(v.field));
  for (int n = 2; n <= max_order; ++n) {
    auto it = methods.find(n);
    if (it == methods.end())
      throw ConfigError("truncated_transform: no method registered for order " +
                        std::to_string(n));
    if (it->second != TermMethod::fourier_grid || n != 2)
      throw ConfigError("truncated_transform on grids supports only order 2 (fourier_grid); "
                        "use the radial pipeline for higher orders");
    BornTermResult term = b2_fourier(v, k);
    out.term_l2_norms.push_back(l2_norm(term.field));
    axpy(out.field, cplx(1.0, 0.0), term.field);
  }
  (void)q;
  return out;
}

RadialTransformResult radial_truncated_transform(const RadialPotential& v, int max_order,
                                                 const std::map<int, TermMethod>& methods,
                                                 const std::vector<double>& out_radii,
                                                 const McSettings& mc,
                                                 const QuadratureSpec& q) {
  if (max_order < 1) throw ConfigError("radial_truncated_transform: max_order >= 1");
  RadialTransformResult out;
  out.radii = out_radii;
  out.values.assign(out_radii.size(), 0.0);
  std::vector<double> base(out_radii.size());
  for (std::size_t i = 0; i < out_radii.size(); ++i)
    base[i] = radial_potential_value(v, out_radii[i]);
  out.terms.push_back(base);
  for (std::size_t i = 0; i < out_radii.size(); ++i) out.values[i] = base[i];
  double b0 = 0.0;
  for (double x : base) b0 = std::max(b0, std::abs(x));
  out.term_norms.push_back(b0);

  for (int n = 2; n <= max_order; ++n) {
    auto it = methods.find(n);
    if (it == methods.end())
      throw ConfigError("radial_truncated_transform: no method for order " +
                        std::to_string(n));
    BornTermResult term;
    TruncatedKernel kn(n, 2.0 * (n - 1) * v.support_radius);
    kn.quad = q;
    if (it->second == TermMethod::radial_quad) {
      if (n != 2) throw ConfigError("radial_quad is implemented for order 2 only");
      term = b2_radial_quad(v, kn, out_radii, q);
    } else if (it->second == TermMethod::radial_mc) {
      McSettings m2 = mc;
      m2.seed = splitmix64(mc.seed + n);
      term = bn_radial(v, n, out_radii, m2, kn, q);
    } else {
      throw ConfigError("radial_truncated_transform: unsupported method");
    }
    out.terms.push_back(term.radial_values);
    double tn = 0.0;
    for (double x : term.radial_values) tn = std::max(tn, std::abs(x));
    out.term_norms.push_back(tn);
    for (std::size_t i = 0; i < out_radii.size(); ++i) out.values[i] += term.radial_values[i];
  }
  return out;
}

}  // namespace bsc

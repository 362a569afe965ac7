#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bsc/backscatter.hpp"

namespace bsc {

// Sobolev exponent bookkeeping for the estimate chain: a_j = min(s_j - m,
// 1 - eps), sigma = min(s_j - a_j) + sum a_j, with m = (n-3)/2.
struct SobolevParams {
  std::vector<double> s_list;
  double epsilon = 0.1;
  double m = 0.0;  // n = 3
  std::vector<double> a_list;
  double sigma = 0.0;

  SobolevParams(std::vector<double> s, double eps, double m_ = 0.0);
};

// M_s(xi_1, ..., xi_N) = <xi_1+xi_N>^{-s_1} <xi_2-xi_1>^{-s_2} ...
//                        <xi_N-xi_{N-1}>^{-s_N}
double weight_m(const std::vector<double>& s_list, const std::vector<Vec3>& xi);

struct HGammaLemmaReport {
  long samples = 0;
  double min_slack_basic = 0.0;  // (1+|s-t|)(1+|t|) - (1+|s|)
  double min_slack_shift = 0.0;  // gamma^{-2}(gamma+|t|)^2 h(s,r) - h(s,r+t)
};
// Exact check of 1+|s-t| >= (1+|s|)/(1+|t|) and the h_gamma shift bound on
// random triples; throws CounterexampleFound on any violation.
HGammaLemmaReport check_hgamma_lemma(long samples, std::uint64_t seed);

// lhs = f_s(r, eta) = int_{S^{n-1}} <r theta - eta>^{-2s} dtheta,
// rhs = C_1 <r>^{-2s} with C_1 = 2^{m+1} c_{n-2} / (m + 1 - s).
// Throws BoundViolated when lhs exceeds rhs.
std::pair<double, double> check_fs_bound(double r, double eta_mod, double s, int n_odd);

struct HGammaConvResult {
  double lhs = 0.0;        // int h_gamma^2(|xi|, rho) <xi - eta>^{-2s} dxi
  double implied_c = 0.0;  // lhs * gamma * <rho>^{2s - 2m}
};
HGammaConvResult check_hgamma_conv(double gamma, double rho, double eta_mod, double s,
                                   const QuadratureSpec& q);

// T_{2,gamma}(xi; s1, s2) against the envelope gamma^{-1} <xi>^{2(m-s1-s2)};
// returns (lhs, envelope); implied constant = lhs / envelope.
std::pair<double, double> check_T2(double gamma, double xi_mod, double s1, double s2,
                                   const QuadratureSpec& q);

struct A2ChainReport {
  double a_value = 0.0;     // sup over sampled |xi_N|
  double sup_at = 0.0;      // |xi_N| attaining the max
  double lhs_sq = 0.0;      // ||B_{2,R} v||_{(sigma)}^2
  double rhs_sq = 0.0;      // (2 pi)^{-3} A prod ||v_j||_{(s_j)}^2
  bool inequality_holds = false;
  double envelope_implied_c = 0.0;  // vs the A-estimate at gamma = 1/R
};
A2ChainReport check_A2_chain(double R, const SobolevParams& p, const GridPotential& v1,
                             const GridPotential& v2, const QuadratureSpec& q);

// A(2, R, s, sigma) alone (max over a log-spaced radial sample of xi_N).
double a2_value(double R, const SobolevParams& p, const QuadratureSpec& q, double* sup_at);

struct ScalingSweepReport {
  int order = 2;
  std::vector<double> supports;
  std::vector<double> ratios;  // ||B_N v||_{H_sigma(B_R)} / ||v||_s^N per support
  double fitted_r_exponent = 0.0;
  double implied_c = 0.0;  // from ||B_N|| <= C^N R^{(N-1)/2} N^{-N/2} ||v||^N
  double amplitude_scaling_error = 0.0;  // relative spread of ratios across amplitudes
  double sigma = 0.0;
};
ScalingSweepReport main_scaling_sweep(int n_order, const std::vector<double>& supports,
                                      const std::vector<double>& amplitudes, double s,
                                      double epsilon, const McSettings& mc,
                                      const QuadratureSpec& q);

}  // namespace bsc

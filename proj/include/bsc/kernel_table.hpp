#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bsc/special_kernels.hpp"

namespace bsc {

// Cached tabulation of F_N over a uniform radius grid with cubic (4-point
// Lagrange) interpolation per axis. Built once, read-only afterwards.
struct KernelTable {
  int order = 2;     // N
  double step = 0.05;
  int n = 0;         // points per axis, grid = {0, step, ..., (n-1)*step}
  QuadratureSpec quad;
  std::vector<std::complex<double>> values;  // n^order entries, row-major
  std::uint64_t content_hash = 0;

  double max_radius() const { return (n - 1) * step; }

  // Throws TableRangeExceeded when any radius lies outside the grid.
  std::complex<double> interpolate(const RadialTuple& r) const;

  void save(const std::string& path) const;
  static KernelTable load(const std::string& path);
  void export_csv(const std::string& path) const;

  static KernelTable build(int order, double r_max, double step, const QuadratureSpec& q);
};

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace bsc

#include "bsc/kernel_table.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsc/parallel.hpp"

namespace bsc {

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::uint64_t table_hash(const KernelTable& t) {
  std::uint64_t h = fnv1a64(&t.order, sizeof(t.order));
  h = fnv1a64(&t.step, sizeof(t.step), h);
  h = fnv1a64(&t.n, sizeof(t.n), h);
  h = fnv1a64(&t.quad.abs_tol, sizeof(double), h);
  h = fnv1a64(&t.quad.rel_tol, sizeof(double), h);
  h = fnv1a64(&t.quad.oscillation_guard, sizeof(double), h);
  if (!t.values.empty())
    h = fnv1a64(t.values.data(), t.values.size() * sizeof(std::complex<double>), h);
  return h;
}

// 4-point Lagrange weights at fractional position u relative to node i1
// (stencil nodes i1-1 .. i1+2 mapped to local coordinates -1, 0, 1, 2).
void cubic_weights(double u, double w[4]) {
  w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
  w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
  w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

}  // namespace

std::complex<double> KernelTable::interpolate(const RadialTuple& r) const {
  if (r.size() != static_cast<std::size_t>(order))
    throw ConfigError("KernelTable::interpolate: tuple length != table order");
  const int dims = order;
  int base[3];
  double wts[3][4];
  for (int d = 0; d < dims; ++d) {
    const double x = r[d];
    if (!(x >= 0.0) || x > max_radius() + 1e-12)
      throw TableRangeExceeded("radius outside kernel table range");
    double cell = x / step;
    int i1 = static_cast<int>(std::floor(cell));
    if (i1 < 1) i1 = 1;
    if (i1 > n - 3) i1 = n - 3;
    cubic_weights(cell - i1, wts[d]);
    base[d] = i1 - 1;
  }
  std::complex<double> acc = 0.0;
  if (dims == 2) {
    for (int i = 0; i < 4; ++i) {
      const std::size_t row = static_cast<std::size_t>(base[0] + i) * n;
      std::complex<double> s = 0.0;
      for (int j = 0; j < 4; ++j) s += wts[1][j] * values[row + base[1] + j];
      acc += wts[0][i] * s;
    }
    return acc;
  }
  if (dims == 3) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const std::size_t row =
            (static_cast<std::size_t>(base[0] + i) * n + (base[1] + j)) * n;
        std::complex<double> s = 0.0;
        for (int k = 0; k < 4; ++k) s += wts[2][k] * values[row + base[2] + k];
        acc += wts[0][i] * wts[1][j] * s;
      }
    return acc;
  }
  throw ConfigError("KernelTable::interpolate supports order 2 or 3");
}

KernelTable KernelTable::build(int order, double r_max, double step, const QuadratureSpec& q) {
  if (order != 2 && order != 3)
    throw ConfigError("KernelTable::build supports order 2 or 3");
  if (!(step > 0.0) || !(r_max > 4.0 * step))
    throw ConfigError("KernelTable::build: invalid grid");
  KernelTable t;
  t.order = order;
  t.step = step;
  t.quad = q;
  t.n = static_cast<int>(std::ceil(r_max / step)) + 1;
  const int n = t.n;
  const std::size_t total = order == 2 ? static_cast<std::size_t>(n) * n
                                       : static_cast<std::size_t>(n) * n * n;
  t.values.assign(total, 0.0);
  if (order == 2) {
    for_each_chunk(n, [&](std::size_t i) {
      const double r1 = i * step;
      for (int j = 0; j < n; ++j) {
        RadialTuple r{std::vector<double>{r1, j * step}};
        t.values[i * n + j] = f_n_eval(2, r, q);
      }
    });
  } else {
    for_each_chunk(static_cast<std::size_t>(n) * n, [&](std::size_t ij) {
      const double r1 = (ij / n) * step;
      const double r2 = (ij % n) * step;
      for (int k = 0; k < n; ++k) {
        RadialTuple r{std::vector<double>{r1, r2, k * step}};
        t.values[ij * n + k] = f_n_eval(3, r, q);
      }
    });
  }
  t.content_hash = table_hash(t);
  return t;
}

void KernelTable::save(const std::string& path) const {
  nlohmann::json h;
  h["format"] = "bsc-kernel-table";
  h["version"] = 1;
  h["order"] = order;
  h["step"] = step;
  h["n"] = n;
  h["r_max"] = max_radius();
  h["count"] = values.size();
  h["quad"] = {{"abs_tol", quad.abs_tol},
               {"rel_tol", quad.rel_tol},
               {"oscillation_guard", quad.oscillation_guard},
               {"max_subdivisions", quad.max_subdivisions}};
  std::ostringstream hx;
  hx << std::hex << content_hash;
  h["hash"] = hx.str();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open kernel table for writing: " + path);
  f << h.dump() << "\n";
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
  if (!f) throw IoError("short write on kernel table: " + path);
}

KernelTable KernelTable::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open kernel table: " + path);
  std::string header;
  std::getline(f, header);
  nlohmann::json h = nlohmann::json::parse(header);
  if (h.value("format", "") != "bsc-kernel-table")
    throw IoError("not a kernel table file: " + path);
  KernelTable t;
  t.order = h.at("order").get<int>();
  t.step = h.at("step").get<double>();
  t.n = h.at("n").get<int>();
  t.quad.abs_tol = h.at("quad").at("abs_tol").get<double>();
  t.quad.rel_tol = h.at("quad").at("rel_tol").get<double>();
  t.quad.oscillation_guard = h.at("quad").at("oscillation_guard").get<double>();
  t.quad.max_subdivisions = h.at("quad").at("max_subdivisions").get<long>();
  const std::size_t count = h.at("count").get<std::size_t>();
  t.values.resize(count);
  f.read(reinterpret_cast<char*>(t.values.data()),
         static_cast<std::streamsize>(count * sizeof(std::complex<double>)));
  if (!f) throw IoError("short read on kernel table: " + path);
  t.content_hash = table_hash(t);
  std::ostringstream hx;
  hx << std::hex << t.content_hash;
  if (h.contains("hash") && h.at("hash").get<std::string>() != hx.str())
    throw IoError("kernel table hash mismatch (corrupt or stale file): " + path);
  return t;
}

void KernelTable::export_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open csv for writing: " + path);
  if (order == 2) {
    f << "r1,r2,re,im\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto v = values[static_cast<std::size_t>(i) * n + j];
        f << i * step << "," << j * step << "," << v.real() << "," << v.imag() << "\n";
      }
  } else {
    f << "r1,r2,r3,re,im\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const auto v = values[(static_cast<std::size_t>(i) * n + j) * n + k];
          f << i * step << "," << j * step << "," << k * step << "," << v.real() << ","
            << v.imag() << "\n";
        }
  }
}

}  // namespace bsc

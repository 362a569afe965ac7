#include "bsc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsc/errors.hpp"
#include "bsc/kernel_table.hpp"
#include "bsc/version.hpp"

namespace bsc {

void save_field(const GridField& f, const std::string& base, double time) {
  {
    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw IoError("cannot write " + base + ".bin");
    bin.write(reinterpret_cast<const char*>(f.a.data()),
              static_cast<std::streamsize>(f.a.size() * sizeof(cplx)));
  }
  nlohmann::json j;
  j["m"] = f.m;
  j["box_halfwidth"] = f.box_halfwidth;
  j["time"] = time;
  j["library_version"] = kLibraryVersion;
  std::ostringstream hx;
  hx << std::hex << fnv1a64(f.a.data(), f.a.size() * sizeof(cplx));
  j["hash"] = hx.str();
  std::ofstream side(base + ".json");
  if (!side) throw IoError("cannot write " + base + ".json");
  side << j.dump(2) << "\n";
}

GridField load_field(const std::string& base) {
  std::ifstream side(base + ".json");
  if (!side) throw IoError("cannot read " + base + ".json");
  nlohmann::json j = nlohmann::json::parse(side);
  GridField f(j.at("m").get<int>(), j.at("box_halfwidth").get<double>());
  std::ifstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot read " + base + ".bin");
  bin.read(reinterpret_cast<char*>(f.a.data()),
           static_cast<std::streamsize>(f.a.size() * sizeof(cplx)));
  if (!bin) throw IoError("short read on " + base + ".bin");
  return f;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    f << header[i] << (i + 1 < header.size() ? "," : "\n");
  f.precision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      f << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

std::uint64_t string_hash(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace bsc

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsc/grid.hpp"

namespace bsc {

// Flat binary complex array <base>.bin plus a JSON sidecar <base>.json
// recording m, the box halfwidth, a time stamp and the content hash.
void save_field(const GridField& f, const std::string& base, double time = 0.0);
GridField load_field(const std::string& base);

// Tidy CSV: one row per sample.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::uint64_t string_hash(const std::string& s);

}  // namespace bsc

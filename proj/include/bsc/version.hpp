#pragma once

namespace bsc {

inline constexpr const char* kLibraryVersion = "0.1.0";

}

#pragma once

namespace geninv {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kLibraryName = "geninv-lab";

}  // namespace geninv

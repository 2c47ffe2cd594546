#pragma once

namespace fibrilgeom {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fibrilgeom

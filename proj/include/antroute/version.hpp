#pragma once

namespace antroute {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace antroute

#pragma once

namespace gridroute {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gridroute

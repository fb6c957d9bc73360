#pragma once

namespace qps {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qps

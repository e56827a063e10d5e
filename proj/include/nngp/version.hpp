#pragma once

namespace nngp {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace nngp

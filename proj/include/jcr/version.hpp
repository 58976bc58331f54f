#pragma once

namespace jcr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jcr

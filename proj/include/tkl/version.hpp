#pragma once

namespace tkl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tkl

#pragma once

namespace birsym {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace birsym

#pragma once

namespace csde {

inline constexpr const char* kVersion = "1.0.0";

} // namespace csde

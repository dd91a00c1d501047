#pragma once

namespace sysgeo {
inline constexpr const char* kVersion = "0.1.0";
}

#pragma once

namespace ktk {
inline constexpr const char* kVersion = "0.3.0";
}

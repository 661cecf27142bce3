#pragma once

namespace tlt {
inline constexpr const char* kVersion = "0.1.0";
}

#pragma once

namespace asg {
inline constexpr const char* kVersion = "0.3.0";
}

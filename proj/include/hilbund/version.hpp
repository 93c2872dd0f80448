#pragma once

namespace hilbund {
inline constexpr const char* kToolVersion = "hilbund 1.0.0";
}

#pragma once

namespace impactsel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace impactsel

#pragma once

namespace hyperact {

inline constexpr const char* kToolName = "hyperact";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace hyperact

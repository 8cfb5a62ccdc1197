#pragma once

namespace causalprompt {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "causalprompt";

}  // namespace causalprompt

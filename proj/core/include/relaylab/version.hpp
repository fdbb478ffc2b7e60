#pragma once

namespace relaylab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "relaylab";

}  // namespace relaylab

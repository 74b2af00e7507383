#pragma once

namespace agc {

inline constexpr const char* kToolName = "agctool";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace agc

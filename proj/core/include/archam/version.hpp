#pragma once

namespace archam {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestSchema = 1;

}  // namespace archam

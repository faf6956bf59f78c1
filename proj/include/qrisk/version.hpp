#pragma once

namespace qrisk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qrisk

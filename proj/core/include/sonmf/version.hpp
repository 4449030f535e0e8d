#pragma once

namespace sonmf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sonmf

#pragma once

namespace valgames {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace valgames

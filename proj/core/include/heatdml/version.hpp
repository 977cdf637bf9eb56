#pragma once

namespace heatdml {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heatdml

#pragma once

namespace gtd {

inline constexpr const char* version = "0.1.0";

}  // namespace gtd

#pragma once

namespace gausscov {

inline constexpr const char* tool_name = "gausscov";
inline constexpr const char* tool_version = "0.1.0";

} // namespace gausscov

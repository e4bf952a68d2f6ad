#pragma once

namespace isoharm {

inline constexpr const char* tool_name = "isoharm";
inline constexpr const char* tool_version = "1.0.0";

} // namespace isoharm

#pragma once

namespace gv {

inline constexpr const char *kVersion = "0.1.0";

} // namespace gv

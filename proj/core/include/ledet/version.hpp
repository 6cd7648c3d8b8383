#pragma once

namespace ledet {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ledet

#pragma once

namespace comjac {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace comjac

#pragma once

namespace dtnflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dtnflow

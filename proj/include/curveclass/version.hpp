#pragma once

namespace curveclass {

inline constexpr const char* kEngineVersion = "curveclass-0.1.0";

}  // namespace curveclass

#pragma once

namespace hardylab {

// Stamped into every emitted record so downstream consumers can detect
// format drift.
inline constexpr const char* artifact_version = "1.0.0";

}  // namespace hardylab

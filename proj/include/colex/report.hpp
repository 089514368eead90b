#pragma once

#include "colex/sim.hpp"

#include <string>

namespace colex {

inline constexpr int kReportSchemaVersion = 1;

// `t,known_fraction,ugv_dist,uav_dist`, one row per simulation step.
std::string progress_csv(const RunReport& report);

// Deterministic fields first; wall-clock measurements live under "timing".
std::string report_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

// Three-mode table with per-mode summaries and speedup ratios.
std::string comparison_json(const ModeComparison& comparison);
std::string comparison_csv(const ModeComparison& comparison);

}  // namespace colex

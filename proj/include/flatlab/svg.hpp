#pragma once

#include <string>

#include "flatlab/conservation.hpp"
#include "flatlab/objective.hpp"
#include "flatlab/profiler.hpp"

namespace flatlab {

/// Self-contained static SVG plots (no external renderer). A generation
/// timestamp comment is emitted unless suppressed.

/// Log-log plot of the variation profile (r, fcirc).
void write_profile_svg(const std::string& path, const FlatnessProfile& p, bool timestamp);

/// Trajectory plot. For 2-d objectives the path is drawn over level curves of
/// f (marching squares on a 256x256 grid); otherwise f is plotted against t.
void write_trajectory_svg(const std::string& path, const ObjectiveHandle& f,
                          const TrajectoryRecord& tr, bool timestamp);

}  // namespace flatlab

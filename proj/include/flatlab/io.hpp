#pragma once

#include <string>

#include "flatlab/conservation.hpp"
#include "flatlab/linalg.hpp"
#include "flatlab/profiler.hpp"

namespace flatlab {

/// Shortest-exact decimal rendering of a double (%.17g), "inf"/"nan" spelled out.
std::string fmt_double(double v);

/// Matrix CSV: header line "rows,cols" then one comma-separated line per row.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

/// Profile CSV: columns "r,fcirc,w1..wn", then a second block "ell,fbar".
void write_profile_csv(const std::string& path, const FlatnessProfile& p);

/// Trajectory CSV: columns "t,x1..xn,f,c,coeff" (nan where not computed).
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& tr, int dim);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace flatlab

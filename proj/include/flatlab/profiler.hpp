#pragma once

#include <cstdint>
#include <string>

#include "flatlab/objective.hpp"

namespace flatlab {

/// Variation profile around a base point: per-radius suprema estimates of
/// |f - f(x)| over closed balls, with maximizer witnesses, plus the dual
/// level-distance grid obtained by inverting the monotone profile.
struct FlatnessProfile {
  Vec base;
  Vec radii;                   // strictly increasing
  Vec values;                  // nondecreasing after post-processing
  std::vector<Vec> witnesses;  // |f(w) - f(base)| == values[i] exactly
  Vec dual_levels;
  Vec dual_values;  // +inf allowed (constant function)
};

enum class Relation { flatter, sharper, equivalent, crossing };

std::string relation_name(Relation r);

struct PreorderVerdict {
  Relation relation = Relation::equivalent;
  double threshold = 0.0;   // largest grid radius up to which the comparison held
  double margin_min = 0.0;  // extremes of fo(y, r) - fo(x, r) over the grid
  double margin_max = 0.0;
  double tau = 0.0;
  bool cross_level = false;
  double crossing_radius = 0.0;  // first flip beyond tau (crossing only)
};

struct SearchResult {
  double value = 0.0;
  Vec witness;
};

/// Best found value of |f(y) - f(x)| over the closed ball of radius r, via
/// `budget` low-discrepancy sphere directions refined by projected gradient
/// ascent on the sphere, plus a ball-interior pattern pass for nonsmooth
/// handles. Deterministic given (inputs, seed); the value is a lower bound on
/// the supremum by construction. A witness from a smaller radius can be
/// passed as a warm start, which makes raw profiles nondecreasing.
SearchResult ball_max_variation(const ObjectiveHandle& f, const Vec& x, double r, int budget,
                                std::uint64_t seed, const Vec* warm_witness = nullptr);

FlatnessProfile profile(const ObjectiveHandle& f, const Vec& x, double r_min, double r_max,
                        int m, int budget, std::uint64_t seed);
FlatnessProfile profile_on_grid(const ObjectiveHandle& f, const Vec& x, const Vec& radii,
                                int budget, std::uint64_t seed);

struct DualityReport {
  double residual_r = 0.0;      // max |fbar(fo(r)) - r|
  double residual_level = 0.0;  // max |fo(fbar(l)) - l|
  double r_scale = 0.0;
  double level_scale = 0.0;
  bool pass = false;
  bool skipped_constant = false;
  bool monotonicity_warning = false;  // profile not strictly increasing
  std::string note;
};

DualityReport duality_check(const FlatnessProfile& p);

/// Flatness preorder decision between x and y on a shared radius grid with
/// tolerance tau = 1e-9 + 1e-6 * max profile value.
PreorderVerdict compare(const ObjectiveHandle& f, const Vec& x, const Vec& y, const Vec& radii,
                        int budget, std::uint64_t seed);

struct CurveCheckRow {
  double r = 0.0;
  double sphere_err = 0.0;   // | |w - x| - r | / r
  double colinearity = 0.0;  // |cos(grad f(w), w - x)|
  double slope = 0.0;        // finite-difference profile slope
  double slope_pred = 0.0;   // r / lambda(r)
  double slope_rel_err = 0.0;
  bool clarke_flag = false;  // |grad f(w)| < 1e-12
};

struct CurveChecks {
  std::vector<CurveCheckRow> rows;
  bool refused_constant = false;
  bool pass_sphere = false;
  bool pass_colinear = false;
  bool pass_slope = false;
};

/// Checks maximizer-on-sphere, gradient colinearity with w - x, and the
/// profile-derivative identity slope = r / lambda(r) on the interior grid.
/// Requires f smooth near the witnesses and x a local minimum.
CurveChecks curve_checks(const ObjectiveHandle& f, const Vec& x, const FlatnessProfile& p);

/// Piecewise-linear inversion of the monotone profile: smallest r on the grid
/// with fo(r) >= level. Returns +inf when the level is never reached.
double invert_profile(const Vec& radii, const Vec& values, double level);

}  // namespace flatlab

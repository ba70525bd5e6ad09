#include "flatlab/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ascent {
  Vec u;       // unit direction
  Vec y;       // x + r u
  double diff; // f(y) - f(x), signed
};

double absval(const Ascent& a) { return std::abs(a.diff); }

// Projected gradient ascent for |f(x + r u) - f(x)| over unit u, with a
// monotone backtracking retraction step.
Ascent sphere_ascent(const ObjectiveHandle& f, const Vec& x, double fx, double r, Vec u,
                     int max_iters) {
  Ascent cur{u, axpy(r, u, x), 0.0};
  cur.diff = f.eval(cur.y) - fx;
  double eta = 0.5;
  for (int it = 0; it < max_iters; ++it) {
    double s = cur.diff >= 0.0 ? 1.0 : -1.0;
    Vec g = f.gradient(cur.y);
    for (double& gi : g) gi *= s;
    double gu = dot(g, cur.u);
    Vec gt = axpy(-gu, cur.u, g);
    double ng = nrm2(gt);
    if (!(ng * r > 1e-16 * (1.0 + std::abs(cur.diff)))) break;
    for (double& gi : gt) gi /= ng;
    bool improved = false;
    for (int trial = 0; trial < 60; ++trial) {
      Vec w = axpy(eta, gt, cur.u);
      normalize(w);
      Vec y2 = axpy(r, w, x);
      double d2 = f.eval(y2) - fx;
      if (std::abs(d2) > std::abs(cur.diff)) {
        cur = Ascent{std::move(w), std::move(y2), d2};
        eta = std::min(eta * 1.8, 2.0);
        improved = true;
        break;
      }
      eta *= 0.5;
      if (eta < 1e-16) break;
    }
    if (!improved) break;
  }
  return cur;
}

// Derivative-free pattern search on the sphere (tangent compass).
Ascent sphere_compass(const ObjectiveHandle& f, const Vec& x, double fx, double r, Vec u) {
  int n = static_cast<int>(x.size());
  Ascent cur{u, axpy(r, u, x), 0.0};
  cur.diff = f.eval(cur.y) - fx;
  double theta = 0.5;
  while (theta > 1e-10) {
    // tangent frame: coordinate axes minus their projection on u
    bool improved = false;
    for (int i = 0; i < n && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vec w = cur.u;
        w[i] += sgn * theta;
        normalize(w);
        Vec y2 = axpy(r, w, x);
        double d2 = f.eval(y2) - fx;
        if (std::abs(d2) > std::abs(cur.diff)) {
          cur = Ascent{std::move(w), std::move(y2), d2};
          improved = true;
          break;
        }
      }
    }
    if (!improved) theta *= 0.5;
  }
  return cur;
}

// Compass search over the closed ball; polishes nonsmooth maxima that sit in
// the interior or at kinks the sphere ascent cannot resolve.
SearchResult ball_compass(const ObjectiveHandle& f, const Vec& x, double fx, double r, Vec y,
                          double val) {
  int n = static_cast<int>(x.size());
  double step = 0.25 * r;
  while (step > 1e-10 * r) {
    bool improved = false;
    for (int i = 0; i < n && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vec y2 = y;
        y2[i] += sgn * step;
        double d = dist(y2, x);
        if (d > r) {
          Vec dir = sub(y2, x);
          y2 = axpy(r / d, dir, x);
        }
        double v2 = std::abs(f.eval(y2) - fx);
        if (v2 > val) {
          y = std::move(y2);
          val = v2;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {val, y};
}

}  // namespace

SearchResult ball_max_variation(const ObjectiveHandle& f, const Vec& x, double r, int budget,
                                std::uint64_t seed, const Vec* warm_witness) {
  if (r < 0.0) throw validation_error("ball_max_variation: negative radius");
  if (budget < 1) throw validation_error("ball_max_variation: budget must be >= 1");
  const int n = f.dim;
  const double fx = f.eval(x);
  SearchResult best{0.0, x};
  if (r == 0.0) return best;

  auto consider = [&](const Vec& y) {
    double v = std::abs(f.eval(y) - fx);
    if (v > best.value) best = {v, y};
  };
  auto refine = [&](const Vec& u) {
    Ascent a = f.has_grad() ? sphere_ascent(f, x, fx, r, u, 120) : sphere_compass(f, x, fx, r, u);
    if (absval(a) > best.value) best = {absval(a), a.y};
  };

  // warm start: a witness from a smaller ball is itself a feasible point, so
  // chained profiles are nondecreasing by construction
  if (warm_witness) {
    double d = dist(*warm_witness, x);
    if (d <= r * (1.0 + 1e-12)) consider(*warm_witness);
    if (d > 1e-300) refine(unit(sub(*warm_witness, x)));
  }
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    refine(e);
    e[i] = -1.0;
    refine(e);
  }
  SphereSequence seq(n, seed);
  for (int i = 0; i < budget; ++i) refine(seq.next());

  if (f.smoothness != Smoothness::smooth && best.value > 0.0) {
    SearchResult polished = ball_compass(f, x, fx, r, best.witness, best.value);
    if (polished.value > best.value) best = polished;
  }
  return best;
}

FlatnessProfile profile_on_grid(const ObjectiveHandle& f, const Vec& x, const Vec& radii,
                                int budget, std::uint64_t seed) {
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= 0.0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw validation_error("profile: radii must be strictly increasing and positive");
  }
  FlatnessProfile p;
  p.base = x;
  p.radii = radii;
  p.values.resize(radii.size());
  p.witnesses.resize(radii.size());
  const Vec* warm = nullptr;
  for (size_t i = 0; i < radii.size(); ++i) {
    SearchResult res = ball_max_variation(f, x, radii[i], budget, seed, warm);
    if (i > 0 && res.value < p.values[i - 1]) {
      // monotone post-processing: carry the better witness forward
      res = {p.values[i - 1], p.witnesses[i - 1]};
    }
    p.values[i] = res.value;
    p.witnesses[i] = std::move(res.witness);
    warm = &p.witnesses[i];
  }
  p.dual_levels = p.values;
  p.dual_values.resize(p.values.size());
  for (size_t i = 0; i < p.values.size(); ++i)
    p.dual_values[i] = p.values[i] > 0.0 ? invert_profile(p.radii, p.values, p.dual_levels[i])
                                         : kInf;
  return p;
}

FlatnessProfile profile(const ObjectiveHandle& f, const Vec& x, double r_min, double r_max,
                        int m, int budget, std::uint64_t seed) {
  if (!(0.0 < r_min && r_min < r_max)) throw validation_error("profile: need 0 < r_min < r_max");
  if (m < 2) throw validation_error("profile: need at least 2 grid points");
  Vec radii(m);
  double ratio = std::log(r_max / r_min);
  for (int i = 0; i < m; ++i) radii[i] = r_min * std::exp(ratio * i / (m - 1));
  radii.back() = r_max;
  return profile_on_grid(f, x, radii, budget, seed);
}

double invert_profile(const Vec& radii, const Vec& values, double level) {
  if (level <= 0.0) return 0.0;
  size_t j = 0;
  while (j < values.size() && values[j] < level) ++j;
  if (j == values.size()) return kInf;
  double r_lo = (j == 0) ? 0.0 : radii[j - 1];
  double v_lo = (j == 0) ? 0.0 : values[j - 1];
  double r_hi = radii[j], v_hi = values[j];
  if (v_hi <= v_lo) return r_lo;  // plateau: infimum at the left end
  double t = (level - v_lo) / (v_hi - v_lo);
  return r_lo + t * (r_hi - r_lo);
}

namespace {

double interp_profile(const Vec& radii, const Vec& values, double r) {
  if (radii.empty()) return 0.0;
  if (r <= radii.front()) {
    // linear through the origin below the grid
    return values.front() * (r / radii.front());
  }
  if (r >= radii.back()) return values.back();
  size_t j = 1;
  while (radii[j] < r) ++j;
  double t = (r - radii[j - 1]) / (radii[j] - radii[j - 1]);
  return values[j - 1] + t * (values[j] - values[j - 1]);
}

}  // namespace

DualityReport duality_check(const FlatnessProfile& p) {
  if (p.radii.empty()) throw validation_error("duality_check: empty profile");
  DualityReport rep;
  rep.r_scale = p.radii.back();
  double vmax = p.values.back();
  rep.level_scale = vmax;
  if (vmax <= 1e-300) {
    rep.skipped_constant = true;
    rep.pass = true;
    rep.note = "constant function: dual values are +inf, check skipped";
    return rep;
  }
  for (size_t i = 0; i + 1 < p.values.size(); ++i) {
    if (p.values[i + 1] - p.values[i] <= 1e-12 * (1.0 + vmax)) {
      rep.monotonicity_warning = true;
      rep.note = "profile not strictly increasing (possible Clarke-critical value in range)";
      break;
    }
  }
  // compose the interpolated maps both ways, at grid nodes and midpoints
  auto fwd = [&](double r) { return interp_profile(p.radii, p.values, r); };
  auto fbar = [&](double l) { return invert_profile(p.radii, p.values, l); };
  for (size_t i = 0; i < p.radii.size(); ++i) {
    double r = p.radii[i];
    rep.residual_r = std::max(rep.residual_r, std::abs(fbar(fwd(r)) - r));
    if (i + 1 < p.radii.size()) {
      double rm = 0.5 * (p.radii[i] + p.radii[i + 1]);
      rep.residual_r = std::max(rep.residual_r, std::abs(fbar(fwd(rm)) - rm));
    }
    double l = p.dual_levels[i];
    if (l > 0.0 && std::isfinite(p.dual_values[i]))
      rep.residual_level = std::max(rep.residual_level, std::abs(fwd(fbar(l)) - l));
  }
  rep.pass = rep.residual_r <= 1e-3 * rep.r_scale && rep.residual_level <= 1e-3 * rep.level_scale;
  return rep;
}

std::string relation_name(Relation r) {
  switch (r) {
    case Relation::flatter: return "Flatter";
    case Relation::sharper: return "Sharper";
    case Relation::equivalent: return "Equivalent";
    case Relation::crossing: return "Crossing";
  }
  return "?";
}

PreorderVerdict compare(const ObjectiveHandle& f, const Vec& x, const Vec& y, const Vec& radii,
                        int budget, std::uint64_t seed) {
  FlatnessProfile px = profile_on_grid(f, x, radii, budget, seed);
  FlatnessProfile py = profile_on_grid(f, y, radii, budget, seed);
  PreorderVerdict v;
  v.cross_level = std::abs(f.eval(x) - f.eval(y)) > 1e-9;
  double vmax = std::max(px.values.back(), py.values.back());
  v.tau = 1e-9 + 1e-6 * vmax;
  v.margin_min = kInf;
  v.margin_max = -kInf;
  bool x_le = true, y_le = true;
  for (size_t i = 0; i < radii.size(); ++i) {
    double d = py.values[i] - px.values[i];
    v.margin_min = std::min(v.margin_min, d);
    v.margin_max = std::max(v.margin_max, d);
    if (d < -v.tau) x_le = false;  // x exceeds y here
    if (d > v.tau) y_le = false;
  }
  if (x_le && y_le) {
    v.relation = Relation::equivalent;
    v.threshold = radii.back();
  } else if (x_le) {
    v.relation = Relation::flatter;
    v.threshold = radii.back();
  } else if (y_le) {
    v.relation = Relation::sharper;
    v.threshold = radii.back();
  } else {
    v.relation = Relation::crossing;
    int first_class = 0;
    v.threshold = 0.0;
    for (size_t i = 0; i < radii.size(); ++i) {
      double d = py.values[i] - px.values[i];
      int cls = d > v.tau ? 1 : (d < -v.tau ? -1 : 0);
      if (cls == 0) continue;
      if (first_class == 0) {
        first_class = cls;
      } else if (cls != first_class) {
        v.crossing_radius = radii[i];
        break;
      }
      v.threshold = radii[i];
    }
  }
  return v;
}

CurveChecks curve_checks(const ObjectiveHandle& f, const Vec& x, const FlatnessProfile& p) {
  CurveChecks out;
  double fx = f.eval(x);
  if (p.values.empty() || p.values.back() <= 1e-14 * (1.0 + std::abs(fx))) {
    out.refused_constant = true;
    return out;
  }
  size_t m = p.radii.size();
  out.pass_sphere = out.pass_colinear = out.pass_slope = true;
  for (size_t i = 0; i < m; ++i) {
    CurveCheckRow row;
    row.r = p.radii[i];
    const Vec& w = p.witnesses[i];
    double d = dist(w, x);
    row.sphere_err = std::abs(d - row.r) / row.r;
    if (row.sphere_err > 1e-6) out.pass_sphere = false;
    Vec g = f.gradient(w);
    double gn = nrm2(g);
    if (gn < 1e-12) {
      row.clarke_flag = true;  // Clarke-critical contamination
      out.rows.push_back(row);
      continue;
    }
    Vec dxw = sub(w, x);
    row.colinearity = std::abs(dot(g, dxw)) / (gn * nrm2(dxw));
    if (row.colinearity < 1.0 - 1e-4) out.pass_colinear = false;
    double lambda = d / gn;
    row.slope_pred = row.r / lambda;
    if (i > 0 && i + 1 < m) {
      row.slope = (p.values[i + 1] - p.values[i - 1]) / (p.radii[i + 1] - p.radii[i - 1]);
      row.slope_rel_err = std::abs(row.slope - row.slope_pred) / std::max(row.slope_pred, 1e-300);
      if (row.slope_rel_err > 0.05) out.pass_slope = false;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace flatlab

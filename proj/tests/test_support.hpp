#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "flatlab/catalog.hpp"
#include "flatlab/objective.hpp"

namespace flatlab::testing {

/// Canonical instantiations of every catalog entry.
inline const std::vector<std::pair<std::string, Vec>>& all_instances() {
  static const std::vector<std::pair<std::string, Vec>> v = {
      {"nn", {}},
      {"mf4", {}},
      {"4th", {}},
      {"orthogonal", {1, 2}},
      {"mf1_ab", {1, 1}},
      {"mf1_ab", {2, 3}},
      {"monomial", {1, 1}},
      {"monomial", {2, 1}},
      {"monomial", {1, 2, 3}},
      {"absprod", {}},
      {"quadform", {3, 1}},
      {"l1norm", {3}},
      {"quartic_line", {}},
      {"sextic_line", {}},
      {"matfac_fro", {2, 2, 2, 2, 0, 0, 1}},
      {"matfac_l1", {2, 2, 2, 2, 2, 0, 0, 1}},
  };
  return v;
}

/// Brute-force variation oracle for 2-d objectives: a 401x401 lattice on
/// [x - r, x + r]^2 intersected with the closed ball, plus the radial
/// projection of every lattice point onto the sphere. No search involved.
inline double dense_grid_oracle(const ObjectiveHandle& f, const Vec& x, double r, int n = 401) {
  double fx = f.eval(x);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec y{x[0] - r + 2.0 * r * i / (n - 1), x[1] - r + 2.0 * r * j / (n - 1)};
      double dx = y[0] - x[0], dy = y[1] - x[1];
      double d = std::sqrt(dx * dx + dy * dy);
      if (d <= r) best = std::max(best, std::abs(f.eval(y) - fx));
      if (d > 1e-300) {
        Vec s{x[0] + dx * r / d, x[1] + dy * r / d};
        best = std::max(best, std::abs(f.eval(s) - fx));
      }
    }
  }
  return best;
}

/// Wraps a handle as s * f (for scaling-covariance checks).
inline ObjectiveHandle scale_objective(const ObjectiveHandle& f, double s) {
  ObjectiveHandle h = f;
  auto base_eval = f.eval;
  h.eval = [base_eval, s](const Vec& x) { return s * base_eval(x); };
  if (f.grad) {
    auto g = f.grad;
    h.grad = [g, s](const Vec& x) { return scaled(g(x), s); };
  }
  if (f.hess_vec) {
    auto hv = f.hess_vec;
    h.hess_vec = [hv, s](const Vec& x, const Vec& v) { return scaled(hv(x, v), s); };
  }
  if (f.dir_deriv_k) {
    auto dd = f.dir_deriv_k;
    h.dir_deriv_k = [dd, s](const Vec& x, const Vec& v, int k) { return s * dd(x, v, k); };
  }
  h.composite.reset();  // scaled outer no longer matches the stored kinds
  return h;
}

}  // namespace flatlab::testing

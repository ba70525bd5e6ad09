#include "flatlab/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace flatlab {

namespace {

// max over sign vectors lam in {-1,1}^m of |J^T lam|; exact for m <= 20
// (the maximum of a convex function over the cube sits at a vertex)
std::pair<double, Vec> infty_two_norm(const Matrix& J) {
  int m = J.rows();
  Vec best_dir;
  double best = -1.0;
  if (m <= 20) {
    std::uint64_t count = 1ull << (m - 1);  // lam and -lam are equivalent
    Vec lam(m, 1.0);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (int i = 0; i + 1 < m; ++i) lam[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      Vec v = J.mul_transposed(lam);
      double s = nrm2(v);
      if (s > best) {
        best = s;
        best_dir = std::move(v);
      }
    }
    return {best, best_dir};
  }
  // coordinate-ascent heuristic beyond vertex enumeration scale
  Vec lam(m, 1.0);
  Vec v = J.mul_transposed(lam);
  best = nrm2(v);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < m; ++i) {
      lam[i] = -lam[i];
      Vec w = J.mul_transposed(lam);
      double s = nrm2(w);
      if (s > best + 1e-15 * best) {
        best = s;
        v = std::move(w);
        improved = true;
      } else {
        lam[i] = -lam[i];
      }
    }
  }
  return {best, v};
}

struct PowerResult {
  double rho = 0.0;
  Vec v;
  bool converged = false;
  int iters = 0;
};

PowerResult power_iterate(const std::function<Vec(const Vec&)>& op, int n, double tol,
                          int max_iter, std::uint64_t seed) {
  Rng rng(seed);
  Vec v(n, 1.0);
  Vec noise = rng.normal_vec(n);
  for (int i = 0; i < n; ++i) v[i] += 1e-3 * noise[i];
  normalize(v);
  PowerResult out;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    Vec w = op(v);
    double rho = dot(v, w);
    double nw = nrm2(w);
    out.iters = it + 1;
    out.rho = rho;
    if (nw < 1e-300) {
      out.rho = 0.0;
      out.v = v;
      out.converged = true;
      return out;
    }
    for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (std::abs(rho - prev) <= tol * std::max(1.0, std::abs(rho))) {
      out.v = v;
      out.converged = true;
      return out;
    }
    prev = rho;
  }
  out.v = v;
  return out;
}

// maximize |psi(v)| over the unit sphere, psi homogeneous of degree k;
// tangent gradient estimated by central differences
std::pair<double, Vec> sphere_max_abs(const std::function<double(const Vec&)>& psi, int n,
                                      int budget, std::uint64_t seed) {
  auto ascend = [&](Vec u) {
    double val = psi(u);
    double eta = 0.5;
    for (int it = 0; it < 80; ++it) {
      double s = val >= 0.0 ? 1.0 : -1.0;
      Vec g(n);
      const double h = 1e-6;
      for (int i = 0; i < n; ++i) {
        Vec up = u, um = u;
        up[i] += h;
        um[i] -= h;
        g[i] = s * (psi(up) - psi(um)) / (2.0 * h);
      }
      double gu = dot(g, u);
      Vec gt = axpy(-gu, u, g);
      double ng = nrm2(gt);
      if (ng <= 1e-14 * (1.0 + std::abs(val))) break;
      for (double& gi : gt) gi /= ng;
      bool improved = false;
      for (int trial = 0; trial < 50; ++trial) {
        Vec w = axpy(eta, gt, u);
        normalize(w);
        double v2 = psi(w);
        if (std::abs(v2) > std::abs(val)) {
          u = std::move(w);
          val = v2;
          eta = std::min(eta * 1.8, 2.0);
          improved = true;
          break;
        }
        eta *= 0.5;
        if (eta < 1e-15) break;
      }
      if (!improved) break;
    }
    return std::make_pair(std::abs(val), u);
  };

  double best = -1.0;
  Vec best_dir(n, 0.0);
  auto consider = [&](const Vec& u) {
    auto [v, w] = ascend(u);
    if (v > best) {
      best = v;
      best_dir = w;
    }
  };
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    consider(e);
  }
  SphereSequence seq(n, seed);
  for (int i = 0; i < budget; ++i) consider(seq.next());
  return {best, best_dir};
}

}  // namespace

FlatnessCoefficient lipschitz_modulus(const ObjectiveHandle& f, const Vec& x,
                                      std::uint64_t seed) {
  FlatnessCoefficient out;
  out.order = 1;
  if (f.composite && f.composite->outer == OuterKind::abs_sum) {
    Vec F = f.composite->inner(x);
    double scale = 1.0 + nrm2(x);
    if (nrm_inf(F) > 1e-9 * scale)
      throw validation_error("lipschitz_modulus: abs_sum closed form requires F(x) = 0");
    Matrix J = f.composite->jacobian(x);
    auto [val, dir] = infty_two_norm(J);
    out.value = val;
    out.direction = unit(dir);
    out.method = CoefficientMethod::composite_closed_form;
    out.is_estimate = J.rows() > 20;
    if (out.is_estimate) out.note = "coordinate-ascent sign search (m > 20)";
    return out;
  }
  // difference-quotient estimate over shrinking balls
  Rng rng(seed ^ 0xabcdef12u);
  double scale = 1.0 + nrm2(x);
  double best = 0.0;
  Vec best_dir(x.size(), 0.0);
  for (double rho : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
    double r = rho * scale;
    for (int k = 0; k < 200; ++k) {
      Vec y = rng.ball_point(x, r);
      Vec z = rng.ball_point(x, r);
      double d = dist(y, z);
      if (d < 1e-14 * r) continue;
      double q = std::abs(f.eval(y) - f.eval(z)) / d;
      if (q > best) {
        best = q;
        best_dir = unit(sub(y, z));
      }
    }
  }
  out.value = best;
  out.direction = best_dir;
  out.method = CoefficientMethod::finite_difference;
  out.is_estimate = true;
  out.note = "sampled difference quotient";
  return out;
}

FlatnessCoefficient hessian_lambda1(const ObjectiveHandle& f, const Vec& x, double tol,
                                    int max_iter, std::uint64_t seed) {
  FlatnessCoefficient out;
  out.order = 2;
  int n = f.dim;
  Vec g = f.gradient(x);
  double scale = 1.0 + nrm2(x) + std::abs(f.eval(x));
  out.near_critical = nrm2(g) <= 1e-6 * scale;

  auto Hv = [&](const Vec& v) { return f.hessian_vec(x, v); };
  PowerResult dominant = power_iterate(Hv, n, tol, max_iter, seed);
  double lam1;
  Vec dir;
  if (dominant.rho >= 0.0) {
    // the dominant eigenvalue is positive, hence it is lambda_1
    lam1 = dominant.rho;
    dir = dominant.v;
    out.converged = dominant.converged;
  } else {
    double sigma = std::abs(dominant.rho);
    auto shifted = [&](const Vec& v) { return axpy(sigma, v, Hv(v)); };
    PowerResult top = power_iterate(shifted, n, tol, max_iter, seed + 1);
    lam1 = top.rho - sigma;
    dir = top.v;
    out.converged = dominant.converged && top.converged;
    out.note = "shifted power iteration (dominant eigenvalue negative)";
  }
  out.value = lam1;
  out.direction = dir;
  out.method = CoefficientMethod::power_iteration;
  if (!out.near_critical)
    out.note += std::string(out.note.empty() ? "" : "; ") +
                "x not near-critical: lambda_1 need not equal the 2nd-order coefficient";
  if (!out.converged) {
    out.is_estimate = true;
    out.note += std::string(out.note.empty() ? "" : "; ") + "power iteration hit max_iter";
  }
  return out;
}

FlatnessCoefficient kth_derivative_norm(const ObjectiveHandle& f, const Vec& x, int k, int budget,
                                        std::uint64_t seed) {
  if (k != 3 && k != 4) throw validation_error("kth_derivative_norm: order must be 3 or 4");
  FlatnessCoefficient out;
  out.order = k;
  int n = f.dim;
  double scale = 1.0 + std::abs(f.eval(x));

  // precondition: lower-order derivatives vanish
  SphereSequence probes(n, seed ^ 0x5151u);
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  for (int i = 0; i < 8; ++i) dirs.push_back(probes.next());
  for (int i = 1; i < k && !out.lower_order_nonzero; ++i)
    for (const Vec& v : dirs)
      if (std::abs(f.dir_deriv(x, v, i)) > 1e-6 * scale) {
        out.lower_order_nonzero = true;
        break;
      }

  auto psi = [&](const Vec& v) { return f.dir_deriv(x, v, k); };
  auto [val, dir] = sphere_max_abs(psi, n, budget, seed);
  out.value = val;
  out.direction = dir;
  out.method = CoefficientMethod::sphere_search;
  if (out.lower_order_nonzero)
    out.note = "lower-order derivative nonzero: value is not a flatness coefficient";
  return out;
}

FlatnessCoefficient flatness_coefficient(const ObjectiveHandle& f, const Vec& x, int order,
                                         int budget, std::uint64_t seed) {
  switch (order) {
    case 1: return lipschitz_modulus(f, x, seed);
    case 2: return hessian_lambda1(f, x, 1e-10, 20000, seed);
    case 3:
    case 4: return kth_derivative_norm(f, x, order, budget, seed);
  }
  throw validation_error("flatness_coefficient: order must be 1..4");
}

OrderFit asymptotic_order_fit(const FlatnessProfile& p) {
  size_t m = p.radii.size();
  if (m < 8) throw validation_error("asymptotic_order_fit: need at least 8 grid points");
  size_t w = m / 3;
  if (w < 3) w = 3;
  OrderFit fit;
  for (size_t i = 0; i < w; ++i) {
    if (p.values[i] <= 0.0) {
      fit.note = "zero values in the fitting window (function locally constant)";
      return fit;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < w; ++i) {
    double lx = std::log(p.radii[i]), ly = std::log(p.values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = w * sxx - sx * sx;
  fit.order = (w * sxy - sx * sy) / denom;
  fit.coefficient = std::exp((sy - fit.order * sx) / w);
  fit.ok = true;
  return fit;
}

std::string verdict_name(CandidateVerdict v) {
  switch (v) {
    case CandidateVerdict::certified_flat: return "certified-flat";
    case CandidateVerdict::certified_not_flat: return "certified-not-flat";
    case CandidateVerdict::undecided: return "undecided";
  }
  return "?";
}

CertificateReport flatness_certificate(const ObjectiveHandle& f, const std::vector<Vec>& candidates,
                                       int order, int budget, std::uint64_t seed) {
  if (candidates.empty()) throw validation_error("flatness_certificate: no candidates");
  double f0 = f.eval(candidates.front());
  for (const Vec& c : candidates)
    if (std::abs(f.eval(c) - f0) > 1e-9)
      throw validation_error("flatness_certificate: candidates not on one level set");

  CertificateReport rep;
  rep.order = order;
  for (const Vec& c : candidates) {
    FlatnessCoefficient fc = flatness_coefficient(f, c, order, budget, seed);
    CertificateRow row;
    row.point = c;
    row.coefficient = fc.value;
    row.flagged = fc.lower_order_nonzero || fc.is_estimate;
    rep.rows.push_back(std::move(row));
  }
  double mn = rep.rows.front().coefficient;
  for (const auto& r : rep.rows) mn = std::min(mn, r.coefficient);
  rep.min_coefficient = mn;
  double tol = std::max(1e-6 * std::abs(mn), 1e-12);
  size_t in_group = 0;
  for (const auto& r : rep.rows)
    if (r.coefficient <= mn + tol) ++in_group;
  rep.separated = in_group < rep.rows.size();
  for (auto& r : rep.rows) {
    if (r.coefficient <= mn + tol)
      r.verdict = rep.separated ? CandidateVerdict::certified_flat : CandidateVerdict::undecided;
    else
      r.verdict = CandidateVerdict::certified_not_flat;
  }
  return rep;
}

}  // namespace flatlab

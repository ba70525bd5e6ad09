#pragma once

#include <cstdint>
#include <string>

#include "flatlab/objective.hpp"
#include "flatlab/profiler.hpp"

namespace flatlab {

enum class CoefficientMethod { composite_closed_form, power_iteration, sphere_search, finite_difference };

/// Order-k flatness coefficient: lip f for k = 1, lambda_1 of the Hessian for
/// k = 2, max_{|v|=1} |f^(k)(x)v^k| for k >= 3.
struct FlatnessCoefficient {
  int order = 0;
  double value = 0.0;
  Vec direction;  // maximizing unit direction
  CoefficientMethod method = CoefficientMethod::finite_difference;
  bool is_estimate = false;          // sampling / heuristic path
  bool near_critical = true;         // |grad f(x)| <= 1e-6 * (1 + scale)
  bool lower_order_nonzero = false;  // precondition f^(i) = 0 (i < k) violated
  bool converged = true;
  std::string note;
};

/// Lipschitz modulus. For abs_sum composites with F(x) = 0 this is the exact
/// (inf,2) induced norm max_{lam in {-1,1}^m} |F'(x)^T lam| (vertex
/// enumeration for m <= 20, coordinate ascent beyond); otherwise a seeded
/// difference-quotient estimate over shrinking balls, flagged as estimate.
FlatnessCoefficient lipschitz_modulus(const ObjectiveHandle& f, const Vec& x,
                                      std::uint64_t seed = 0);

/// lambda_1(hessian) by power iteration on the Hessian-vector oracle with a
/// deterministic start. Away from critical points the spectral radius is
/// computed via a shifted second pass and the result is flagged.
FlatnessCoefficient hessian_lambda1(const ObjectiveHandle& f, const Vec& x, double tol = 1e-10,
                                    int max_iter = 20000, std::uint64_t seed = 0);

/// max_{|v|=1} |f^(k)(x)v^k| for k = 3, 4 by multi-start projected ascent.
FlatnessCoefficient kth_derivative_norm(const ObjectiveHandle& f, const Vec& x, int k, int budget,
                                        std::uint64_t seed);

/// Dispatch on order 1..4.
FlatnessCoefficient flatness_coefficient(const ObjectiveHandle& f, const Vec& x, int order,
                                         int budget = 32, std::uint64_t seed = 0);

struct OrderFit {
  double order = 0.0;
  double coefficient = 0.0;
  bool ok = false;
  std::string note;
};

/// Least-squares fit of log fo vs log r over the smallest third of the grid.
OrderFit asymptotic_order_fit(const FlatnessProfile& p);

enum class CandidateVerdict { certified_flat, certified_not_flat, undecided };

std::string verdict_name(CandidateVerdict v);

struct CertificateRow {
  Vec point;
  double coefficient = 0.0;
  CandidateVerdict verdict = CandidateVerdict::undecided;
  bool flagged = false;  // lower-order derivatives nonzero, or estimate path
};

struct CertificateReport {
  int order = 0;
  std::vector<CertificateRow> rows;
  double min_coefficient = 0.0;
  bool separated = false;  // argmin group separated from the rest by > 1e-6 rel
};

/// Order-k certificate over same-level candidates: the argmin group is
/// certified flat when separated from every other candidate by more than
/// 1e-6 relative; candidates above the group are certified not flat; if the
/// argmin group is the whole set, everything is undecided (ties cannot be
/// decided at order k).
CertificateReport flatness_certificate(const ObjectiveHandle& f, const std::vector<Vec>& candidates,
                                       int order, int budget = 32, std::uint64_t seed = 0);

}  // namespace flatlab

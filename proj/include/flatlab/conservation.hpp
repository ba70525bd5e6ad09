#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flatlab/objective.hpp"

namespace flatlab {

/// Lie-algebra generators of a linear symmetry plus the Frobenius-orthonormal
/// basis of the span of their symmetrizations s(g) = {(A + A^T)/2}.
struct GeneratorSet {
  int n = 0;
  std::vector<Matrix> generators;
  std::vector<Matrix> sym_basis;  // orthonormal, symmetric; may be empty (skew case)
  int requested = 0;              // generator count before orthonormalization
  int rank() const { return static_cast<int>(sym_basis.size()); }
};

GeneratorSet make_generator_set(int n, std::vector<Matrix> generators);

// Common presets.
GeneratorSet scaling_generators(const Vec& weights);                // span{diag(w)}
GeneratorSet monomial_generators(const std::vector<int>& upsilon);  // diag(u_n,0,..,-u_i) family
GeneratorSet skew_generators(int n);                                // all skew matrices
GeneratorSet matfac_generators(int m, int n, int r);                // (X, Y) -> (XB, -BY)

/// Conserved quantity induced by a symmetry: coefficients q_j(x) = <B_j, xx^T>,
/// c(x) = 1/4 sum_j (q_j(x) - q_j(anchor))^2, grad c = sum_j (q_j - q_j(anchor)) B_j x.
/// Without an anchor the reference coefficients are zero.
struct ConservedQuantity {
  GeneratorSet gen;
  std::optional<Vec> anchor;
  Vec anchor_coeffs;

  Vec coeffs(const Vec& x) const;  // C(x)
  double c(const Vec& x) const;
  Vec grad_c(const Vec& x) const;
};

ConservedQuantity build_conserved(const GeneratorSet& gen,
                                  const std::optional<Vec>& anchor = std::nullopt);

enum class FlowField { grad_c, neg_grad_c, neg_grad_f };
enum class Termination { time_limit, gradient_small, diverged };

FlowField parse_flow_field(const std::string& name);
std::string flow_field_name(FlowField f);
std::string termination_name(Termination t);

struct TrajectoryRecord {
  Vec times;
  std::vector<Vec> states;
  Vec f_values;
  Vec c_values;      // empty when no conserved quantity is attached
  Vec coeff_values;  // filled by flattening_check
  double step_size = 0.0;
  Termination termination = Termination::time_limit;
};

struct FlowOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  Vec record_times;          // empty: record every macro step
  double step_tol = 1e-8;    // per-step full-vs-halved acceptance
  int max_halvings = 20;
  double gradient_floor = 1e-12;
  double state_cap = 1e8;
};

/// Classical RK4 with fixed macro step and recursive step-halving refinement
/// (full step vs two half steps, accepted when they differ <= step_tol).
/// Stops early on |field| < gradient_floor or |state| > state_cap.
TrajectoryRecord flow_integrate(FlowField field, const ObjectiveHandle& f,
                                const ConservedQuantity* cq, const Vec& x0,
                                const FlowOptions& opt);

enum class ConservedValue { f_conserved, c_conserved };

/// Max |value(t) - value(0)| over the record.
double conservation_check(const TrajectoryRecord& tr, ConservedValue which);

struct FlatteningReport {
  bool monotone = false;    // coefficient nonincreasing up to 1e-9
  double fitted_rate = 0.0; // least-squares slope of log coefficient vs t
  Vec coefficients;
  int failed_index = -1;
};

/// Order-k flatness coefficient along the trajectory (stored into
/// tr.coeff_values); monotonicity and fitted exponential rate.
FlatteningReport flattening_check(TrajectoryRecord& tr, const ObjectiveHandle& f, int order,
                                  int budget = 32, std::uint64_t seed = 0);

/// Gradient descent with per-iteration step lengths: the update is
/// x - schedule(k) * grad f / max(1, |grad f|), i.e. schedule(k) is the step
/// length wherever |grad f| >= 1 and a plain gradient step otherwise.
/// Records every iterate with times = iteration index.
TrajectoryRecord gradient_descent(const ObjectiveHandle& f, const Vec& x0,
                                  const std::function<double(int)>& schedule, int iters,
                                  const ConservedQuantity* cq = nullptr);

}  // namespace flatlab

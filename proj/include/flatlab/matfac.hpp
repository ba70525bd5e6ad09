#pragma once

#include <functional>

#include "flatlab/objective.hpp"

namespace flatlab {

/// A matrix-factorization point (X, Y) against a target M, with cached SVDs,
/// the fit residual ||XY - M||_F and the balance matrix X^T X - Y Y^T.
struct FactorPair {
  Matrix M, X, Y;
  Svd svd_M, svd_X, svd_Y;
  double residual = 0.0;
  Matrix balance;

  static FactorPair make(Matrix M, Matrix X, Matrix Y);
};

/// Every exact factorization XY = M is (U S^(1/2) A, A^(-1) S^(1/2) V^T) for
/// an invertible A of order rank(M). Singular values below 1e-10 * sigma_1
/// are treated as zero when computing the rank.
FactorPair exact_factorizations(const Matrix& M, const Matrix& A);

struct FrobeniusFlatVerdict {
  bool is_flat = false;
  double lambda1 = 0.0;            // ||X||_2^2 + ||Y||_2^2
  double spectral_gap = 0.0;       // ||X||_2^2 + ||Y||_2^2 - 2 ||M||_2
  double product_tightness = 0.0;  // ||X||_2 ||Y||_2 - ||XY||_2
  double sx = 0.0, sy = 0.0, sqrt_m2 = 0.0;
};

/// Flatness certificate for a global minimum of f = ||XY - M||_F^2 / 2:
/// flat iff both spectral norms equal sqrt(||M||_2) within 1e-8 relative.
FrobeniusFlatVerdict flat_check_frobenius(const FactorPair& p);

/// Element of the maximal Hessian eigenspace, parametrized by top singular
/// blocks: H = U_X [A 0; 0 0] U_Y^T, K = V_X [B 0; 0 0] V_Y^T with
/// ||X||_2 A = ||Y||_2 B.
struct EigenspaceElement {
  Matrix H, K;
  Matrix A, B;
  double rayleigh = 0.0;
};

struct BalancedResidual {
  double residual = 0.0;  // min ||H^T H - K K^T||_F over unit eigenspace elements
  EigenspaceElement witness;
};

BalancedResidual balanced_eigvec_residual(const FactorPair& p, int budget, std::uint64_t seed);

struct NuclearBalanceReport {
  double nuclear_gap = 0.0;   // ||X||_F^2 + ||Y||_F^2 - 2 ||M||_*
  double balance_norm = 0.0;  // ||X^T X - Y Y^T||_F
  bool frobenius_optimal = false;
};

NuclearBalanceReport nuclear_balance_check(const FactorPair& p);

/// Closed-form flat minima and Lipschitz curve for |x1 x3 - a| + |x2 x3 - b|,
/// cross-checked against the calculus module at sample points.
struct L1FlatAnalysis {
  std::vector<Vec> flat_points;
  double t_star = 0.0;                     // argmin of lip^2 over t > 0
  std::function<double(double)> lip_sq;    // t -> 2/t^2 + (|a|+|b|)^2 t^2
  double lip_sq_at_t_star = 0.0;
  double max_formula_error = 0.0;          // |lip^2(numeric) - lip^2(formula)| over samples
  double t_star_check_error = 0.0;         // |grid argmin - closed form|
};

L1FlatAnalysis l1_flat_analysis(double a, double b);

// Vectorized objectives over x = [vec(X); vec(Y)] (row-major blocks).
ObjectiveHandle matfac_frobenius_objective(const Matrix& M, int r);
ObjectiveHandle matfac_l1_objective(const Matrix& M, int r);

Vec pack_pair(const Matrix& X, const Matrix& Y);
void unpack_pair(const Vec& z, int m, int n, int r, Matrix& X, Matrix& Y);

}  // namespace flatlab

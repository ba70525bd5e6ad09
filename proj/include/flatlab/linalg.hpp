#pragma once

#include "flatlab/util.hpp"

namespace flatlab {

// ---------------------------------------------------------------------------
// Vector helpers

double dot(const Vec& a, const Vec& b);
double nrm2(const Vec& a);
double nrm_inf(const Vec& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double s);
Vec axpy(double alpha, const Vec& x, const Vec& y);  // alpha*x + y
void normalize(Vec& a);
Vec unit(const Vec& a);
double dist(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

// ---------------------------------------------------------------------------
// Small dense matrices, row-major. Sized for desk-scale problems (<= 200).

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n);
  static Matrix diag(const Vec& d);
  static Matrix from_rows(const std::vector<Vec>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Vec mul(const Vec& x) const;
  Vec mul_transposed(const Vec& x) const;  // A^T x
  Matrix mul(const Matrix& b) const;
  Matrix transpose() const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix scaled(double s) const;
  Vec col(int j) const;
  Vec row(int i) const;
  Matrix cols_range(int j0, int j1) const;  // columns [j0, j1)

  double frobenius() const;
  double max_abs() const;
  const Vec& data() const { return a_; }
  Vec& data() { return a_; }

 private:
  int rows_ = 0, cols_ = 0;
  Vec a_;
};

double frobenius_inner(const Matrix& a, const Matrix& b);
Matrix symmetrize(const Matrix& a);  // (A + A^T)/2

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps until the
// off-diagonal Frobenius mass is <= 1e-13 * ||S||_F. Eigenvalues are sorted
// in descending order; eigenvectors are the matching orthonormal columns.

struct EigenDecomposition {
  Vec values;
  Matrix vectors;
  int sweeps = 0;
};

EigenDecomposition jacobi_symmetric_eigen(const Matrix& S);

// ---------------------------------------------------------------------------
// Compact SVD via the Gram matrix of the smaller side: A = U diag(sigma) V^T
// with k = min(rows, cols) columns in U and V, sigma descending. Singular
// vectors below sigma = 1e-12 are completed by Gram-Schmidt.

struct Svd {
  Matrix U;
  Vec sigma;
  Matrix V;
  Matrix reconstruct() const;
};

Svd svd(const Matrix& A);

double spectral_norm(const Matrix& A);
double nuclear_norm(const Matrix& A);
/// Multiplicity of sigma_1 with relative gap threshold.
int top_multiplicity(const Svd& s, double rel_gap = 1e-8);
/// Inverse of a square invertible matrix (via SVD; desk scale).
Matrix inverse(const Matrix& A);
/// sigma_1 / sigma_min, +inf when singular.
double condition_estimate(const Matrix& A);

}  // namespace flatlab

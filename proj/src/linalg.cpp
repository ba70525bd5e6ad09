#include "flatlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace flatlab {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double nrm_inf(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

Vec add(const Vec& a, const Vec& b) {
  Vec out(a);
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec out(a);
  for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Vec scaled(const Vec& a, double s) {
  Vec out(a);
  for (double& x : out) x *= s;
  return out;
}

Vec axpy(double alpha, const Vec& x, const Vec& y) {
  Vec out(y);
  for (size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

void normalize(Vec& a) {
  double n = nrm2(a);
  if (n > 0.0)
    for (double& x : a) x /= n;
}

Vec unit(const Vec& a) {
  Vec out(a);
  normalize(out);
  return out;
}

double dist(const Vec& a, const Vec& b) { return nrm2(sub(a, b)); }

bool all_finite(const Vec& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diag(const Vec& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

Vec Matrix::mul(const Vec& x) const {
  Vec out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

Vec Matrix::mul_transposed(const Vec& x) const {
  Vec out(cols_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[j] += (*this)(i, j) * x[i];
  return out;
}

Matrix Matrix::mul(const Matrix& b) const {
  Matrix out(rows_, b.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::operator+(const Matrix& b) const {
  Matrix out(*this);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] += b.a_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& b) const {
  Matrix out(*this);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] -= b.a_[i];
  return out;
}

Matrix Matrix::scaled(double s) const {
  Matrix out(*this);
  for (double& x : out.a_) x *= s;
  return out;
}

Vec Matrix::col(int j) const {
  Vec out(rows_);
  for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Vec Matrix::row(int i) const {
  Vec out(cols_);
  for (int j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
  return out;
}

Matrix Matrix::cols_range(int j0, int j1) const {
  Matrix out(rows_, j1 - j0);
  for (int i = 0; i < rows_; ++i)
    for (int j = j0; j < j1; ++j) out(i, j - j0) = (*this)(i, j);
  return out;
}

double Matrix::frobenius() const { return nrm2(a_); }

double Matrix::max_abs() const { return nrm_inf(a_); }

double frobenius_inner(const Matrix& a, const Matrix& b) { return dot(a.data(), b.data()); }

Matrix symmetrize(const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + a(j, i));
  return out;
}

namespace {

double off_diagonal_mass(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_symmetric_eigen(const Matrix& S) {
  int n = S.rows();
  if (n != S.cols()) throw validation_error("jacobi_symmetric_eigen: matrix not square");
  if (n > 200) throw validation_error("jacobi_symmetric_eigen: size > 200");
  double norm = S.frobenius();
  {
    Matrix skew = S - S.transpose();
    if (skew.max_abs() > 1e-10 * (1.0 + norm))
      throw validation_error("jacobi_symmetric_eigen: matrix not symmetric");
  }

  Matrix a = symmetrize(S);
  Matrix v = Matrix::identity(n);
  const double tol = 1e-13 * (norm > 0.0 ? norm : 1.0);
  int sweeps = 0;
  for (; sweeps < 100; ++sweeps) {
    if (off_diagonal_mass(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenDecomposition out;
  out.sweeps = sweeps;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return out.values[i] > out.values[j]; });
  Vec sorted(n);
  Matrix vectors(n, n);
  for (int j = 0; j < n; ++j) {
    sorted[j] = out.values[order[j]];
    for (int i = 0; i < n; ++i) vectors(i, j) = v(i, order[j]);
  }
  out.values = std::move(sorted);
  out.vectors = std::move(vectors);
  return out;
}

Matrix Svd::reconstruct() const {
  Matrix s = Matrix::diag(sigma);
  return U.mul(s).mul(V.transpose());
}

namespace {

// Orthonormal completion of the columns of m beyond column `have`.
void gram_schmidt_complete(Matrix& m, int have) {
  int rows = m.rows(), want = m.cols();
  int next_axis = 0;
  for (int j = have; j < want; ++j) {
    Vec cand;
    for (;;) {
      cand.assign(rows, 0.0);
      if (next_axis < rows) {
        cand[next_axis++] = 1.0;
      } else {
        // degenerate; fall back to a deterministic pseudo-random direction
        Rng rng(static_cast<std::uint64_t>(j) * 7919u + 13u);
        cand = rng.unit_vector(rows);
      }
      for (int k = 0; k < j; ++k) {
        double proj = 0.0;
        for (int i = 0; i < rows; ++i) proj += m(i, k) * cand[i];
        for (int i = 0; i < rows; ++i) cand[i] -= proj * m(i, k);
      }
      double n = nrm2(cand);
      if (n > 1e-8) {
        for (int i = 0; i < rows; ++i) m(i, j) = cand[i] / n;
        break;
      }
    }
  }
}

}  // namespace

Svd svd(const Matrix& A) {
  int m = A.rows(), n = A.cols();
  if (m == 0 || n == 0) throw validation_error("svd: empty matrix");
  if (std::max(m, n) > 200) throw validation_error("svd: size > 200");
  if (m < n) {
    Svd t = svd(A.transpose());
    return Svd{t.V, t.sigma, t.U};
  }
  // m >= n: Gram matrix A^T A is the smaller side
  Matrix g = A.transpose().mul(A);
  EigenDecomposition eig = jacobi_symmetric_eigen(g);
  int k = n;
  Svd out;
  out.sigma.resize(k);
  out.V = eig.vectors;
  out.U = Matrix(m, k);
  int have = 0;
  for (int j = 0; j < k; ++j) {
    double lam = std::max(eig.values[j], 0.0);
    double s = std::sqrt(lam);
    out.sigma[j] = s;
    if (s > 1e-12) {
      Vec u = A.mul(out.V.col(j));
      for (int i = 0; i < m; ++i) out.U(i, j) = u[i] / s;
      have = j + 1;
    }
  }
  gram_schmidt_complete(out.U, have);
  return out;
}

double spectral_norm(const Matrix& A) { return svd(A).sigma.front(); }

double nuclear_norm(const Matrix& A) {
  Svd s = svd(A);
  double sum = 0.0;
  for (double v : s.sigma) sum += v;
  return sum;
}

int top_multiplicity(const Svd& s, double rel_gap) {
  if (s.sigma.empty()) return 0;
  double s1 = s.sigma[0];
  if (s1 <= 0.0) return static_cast<int>(s.sigma.size());
  int d = 1;
  while (d < static_cast<int>(s.sigma.size()) && s.sigma[d] >= s1 * (1.0 - rel_gap)) ++d;
  return d;
}

Matrix inverse(const Matrix& A) {
  if (A.rows() != A.cols()) throw validation_error("inverse: matrix not square");
  Svd s = svd(A);
  int n = A.rows();
  if (s.sigma.back() <= 0.0 || s.sigma.front() / s.sigma.back() >= 1e12)
    throw validation_error("inverse: matrix numerically singular");
  Vec inv_sigma(n);
  for (int i = 0; i < n; ++i) inv_sigma[i] = 1.0 / s.sigma[i];
  return s.V.mul(Matrix::diag(inv_sigma)).mul(s.U.transpose());
}

double condition_estimate(const Matrix& A) {
  Svd s = svd(A);
  if (s.sigma.back() <= 0.0) return std::numeric_limits<double>::infinity();
  return s.sigma.front() / s.sigma.back();
}

}  // namespace flatlab

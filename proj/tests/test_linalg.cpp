#include <doctest.h>

#include <cmath>

#include "flatlab/linalg.hpp"

using namespace flatlab;

namespace {

Matrix random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s(i, j) = s(j, i) = rng.normal();
  return s;
}

Matrix random_matrix(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("jacobi on diag(3,1)") {
  EigenDecomposition e = jacobi_symmetric_eigen(Matrix::diag({3.0, 1.0}));
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("jacobi reconstruction on random 8x8, seed 7") {
  Matrix s = random_symmetric(8, 7);
  EigenDecomposition e = jacobi_symmetric_eigen(s);
  Matrix rec = e.vectors.mul(Matrix::diag(e.values)).mul(e.vectors.transpose());
  CHECK((rec - s).frobenius() <= 1e-9 * s.frobenius());
  Matrix vtv = e.vectors.transpose().mul(e.vectors) - Matrix::identity(8);
  CHECK(vtv.max_abs() <= 1e-12);
  for (int i = 0; i + 1 < 8; ++i) CHECK(e.values[i] >= e.values[i + 1]);
}

TEST_CASE("jacobi rank-1 spectrum") {
  Vec v{1.2, -0.8, 1.0, 0.6};
  double nv = nrm2(v);
  for (double& x : v) x *= 2.0 / nv;  // |v| = 2
  Matrix s(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = v[i] * v[j];
  EigenDecomposition e = jacobi_symmetric_eigen(s);
  CHECK(e.values[0] == doctest::Approx(4.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(e.values[i]) <= 1e-12);
}

TEST_CASE("jacobi rejects asymmetry") {
  Matrix s(2, 2);
  s(0, 1) = 1.0;  // s(1,0) = 0
  CHECK_THROWS_AS(jacobi_symmetric_eigen(s), validation_error);
}

TEST_CASE("svd of diag(a,b)") {
  Svd s = svd(Matrix::diag({2.0, 1.0}));
  CHECK(s.sigma[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.sigma[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("svd reconstruction on random 5x3, seed 11") {
  Matrix a = random_matrix(5, 3, 11);
  Svd s = svd(a);
  CHECK((s.reconstruct() - a).frobenius() <= 1e-8 * (1.0 + a.frobenius()));
  Matrix utu = s.U.transpose().mul(s.U) - Matrix::identity(3);
  Matrix vtv = s.V.transpose().mul(s.V) - Matrix::identity(3);
  CHECK(utu.max_abs() <= 1e-10);
  CHECK(vtv.max_abs() <= 1e-10);
}

TEST_CASE("svd of wide and zero matrices") {
  Matrix a = random_matrix(3, 5, 4);
  Svd s = svd(a);
  CHECK((s.reconstruct() - a).frobenius() <= 1e-8 * (1.0 + a.frobenius()));
  Svd z = svd(Matrix(3, 3));
  for (double sv : z.sigma) CHECK(sv == 0.0);
  CHECK((z.U.transpose().mul(z.U) - Matrix::identity(3)).max_abs() <= 1e-12);
}

TEST_CASE("rank-deficient svd keeps orthonormal completion") {
  Matrix a(4, 3);
  Vec u{1, 2, -1, 0.5}, v{0.3, -0.7, 1.1};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = u[i] * v[j];
  Svd s = svd(a);
  CHECK(s.sigma[0] > 0.0);
  CHECK(s.sigma[1] <= 1e-10);
  CHECK((s.reconstruct() - a).frobenius() <= 1e-8 * (1.0 + a.frobenius()));
  CHECK((s.U.transpose().mul(s.U) - Matrix::identity(3)).max_abs() <= 1e-9);
}

TEST_CASE("inverse and condition estimate") {
  Matrix a(2, 2);
  a(0, 0) = 2.0;
  a(0, 1) = 1.0;
  a(1, 1) = 0.5;
  Matrix ai = inverse(a);
  CHECK((a.mul(ai) - Matrix::identity(2)).max_abs() <= 1e-12);
  CHECK(condition_estimate(Matrix::diag({1.0, 1e-3})) == doctest::Approx(1e3).epsilon(1e-9));
  CHECK_THROWS_AS(inverse(Matrix(2, 2)), validation_error);
}

TEST_CASE("spectral and nuclear norms") {
  Matrix m = Matrix::diag({2.0, 1.0});
  CHECK(spectral_norm(m) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(nuclear_norm(m) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("top multiplicity thresholds") {
  CHECK(top_multiplicity(svd(Matrix::diag({2.0, 2.0, 1.0}))) == 2);
  CHECK(top_multiplicity(svd(Matrix::diag({2.0, 1.0}))) == 1);
}

}  // TEST_SUITE

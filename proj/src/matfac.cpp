#include "flatlab/matfac.hpp"

#include <algorithm>
#include <cmath>

#include "flatlab/calculus.hpp"
#include "flatlab/catalog.hpp"

namespace flatlab {

Vec pack_pair(const Matrix& X, const Matrix& Y) {
  Vec z;
  z.reserve(X.data().size() + Y.data().size());
  z.insert(z.end(), X.data().begin(), X.data().end());
  z.insert(z.end(), Y.data().begin(), Y.data().end());
  return z;
}

void unpack_pair(const Vec& z, int m, int n, int r, Matrix& X, Matrix& Y) {
  X = Matrix(m, r);
  Y = Matrix(r, n);
  std::copy(z.begin(), z.begin() + m * r, X.data().begin());
  std::copy(z.begin() + m * r, z.end(), Y.data().begin());
}

FactorPair FactorPair::make(Matrix M, Matrix X, Matrix Y) {
  FactorPair p;
  p.M = std::move(M);
  p.X = std::move(X);
  p.Y = std::move(Y);
  if (p.X.cols() != p.Y.rows() || p.X.rows() != p.M.rows() || p.Y.cols() != p.M.cols())
    throw validation_error("FactorPair: inconsistent shapes");
  p.svd_M = svd(p.M);
  p.svd_X = svd(p.X);
  p.svd_Y = svd(p.Y);
  p.residual = (p.X.mul(p.Y) - p.M).frobenius();
  p.balance = p.X.transpose().mul(p.X) - p.Y.mul(p.Y.transpose());
  return p;
}

FactorPair exact_factorizations(const Matrix& M, const Matrix& A) {
  Svd sm = svd(M);
  double s1 = sm.sigma.front();
  int rank = 0;
  for (double s : sm.sigma)
    if (s > 1e-10 * s1) ++rank;
  if (rank == 0) throw validation_error("exact_factorizations: target has rank 0");
  if (A.rows() != rank || A.cols() != rank)
    throw validation_error("exact_factorizations: A must be " + std::to_string(rank) + "x" +
                           std::to_string(rank));
  if (condition_estimate(A) >= 1e12)
    throw validation_error("exact_factorizations: A numerically singular");
  Vec root(rank);
  for (int i = 0; i < rank; ++i) root[i] = std::sqrt(sm.sigma[i]);
  Matrix Ur = sm.U.cols_range(0, rank);
  Matrix Vr = sm.V.cols_range(0, rank);
  Matrix X = Ur.mul(Matrix::diag(root)).mul(A);
  Matrix Y = inverse(A).mul(Matrix::diag(root)).mul(Vr.transpose());
  return FactorPair::make(M, std::move(X), std::move(Y));
}

namespace {

void require_global_minimum(const FactorPair& p, const char* who) {
  if (p.residual > 1e-8 * (1.0 + p.M.frobenius()))
    throw validation_error(std::string(who) + ": pair is not a global minimum (XY != M)");
}

}  // namespace

FrobeniusFlatVerdict flat_check_frobenius(const FactorPair& p) {
  require_global_minimum(p, "flat_check_frobenius");
  FrobeniusFlatVerdict v;
  v.sx = p.svd_X.sigma.front();
  v.sy = p.svd_Y.sigma.front();
  double m2 = p.svd_M.sigma.front();
  v.sqrt_m2 = std::sqrt(m2);
  double tol = 1e-8 * std::max(v.sqrt_m2, 1e-300);
  v.is_flat = std::abs(v.sx - v.sqrt_m2) <= tol && std::abs(v.sy - v.sqrt_m2) <= tol;
  v.lambda1 = v.sx * v.sx + v.sy * v.sy;
  v.spectral_gap = v.lambda1 - 2.0 * m2;
  v.product_tightness = v.sx * v.sy - spectral_norm(p.X.mul(p.Y));
  return v;
}

namespace {

// eigenspace element from the top-block parameter A (and B = ratio * A)
void eigenspace_element(const FactorPair& p, int dX, int dY, const Matrix& A, double ratio,
                        Matrix& H, Matrix& K) {
  Matrix Ux = p.svd_X.U.cols_range(0, dX);
  Matrix Uy = p.svd_Y.U.cols_range(0, dY);
  Matrix Vx = p.svd_X.V.cols_range(0, dX);
  Matrix Vy = p.svd_Y.V.cols_range(0, dY);
  H = Ux.mul(A).mul(Uy.transpose());
  K = Vx.mul(A.scaled(ratio)).mul(Vy.transpose());
}

double balance_defect(const Matrix& H, const Matrix& K) {
  return (H.transpose().mul(H) - K.mul(K.transpose())).frobenius();
}

}  // namespace

BalancedResidual balanced_eigvec_residual(const FactorPair& p, int budget, std::uint64_t seed) {
  require_global_minimum(p, "balanced_eigvec_residual");
  double sx = p.svd_X.sigma.front(), sy = p.svd_Y.sigma.front();
  if (std::abs(sx - sy) > 1e-8 * std::max({sx, sy, 1e-300}))
    throw validation_error("balanced_eigvec_residual: precondition |X|_2 = |Y|_2 fails");
  int dX = top_multiplicity(p.svd_X);
  int dY = top_multiplicity(p.svd_Y);
  double ratio = sy > 0.0 ? sx / sy : 1.0;
  // ||H||^2 + ||K||^2 = (1 + ratio^2) ||A||^2 = 1
  const double radius = 1.0 / std::sqrt(1.0 + ratio * ratio);
  const int D = dX * dY;

  auto defect = [&](const Vec& a) {
    Matrix A(dX, dY);
    A.data() = a;
    Matrix H, K;
    eigenspace_element(p, dX, dY, A, ratio, H, K);
    return balance_defect(H, K);
  };

  Vec best_a;
  double best = std::numeric_limits<double>::infinity();
  auto polish = [&](Vec a) {
    normalize(a);
    for (double& v : a) v *= radius;
    double val = defect(a);
    // descent with central-difference gradient, then a compass pass that
    // resolves the V-shaped floor near an exact zero
    double eta = 0.25;
    for (int it = 0; it < 120; ++it) {
      Vec g(D);
      const double h = 1e-7;
      for (int i = 0; i < D; ++i) {
        Vec ap = a, am = a;
        ap[i] += h;
        am[i] -= h;
        g[i] = (defect(ap) - defect(am)) / (2.0 * h);
      }
      double ga = dot(g, a) / (radius * radius);
      Vec gt = axpy(-ga, a, g);
      double ng = nrm2(gt);
      if (ng <= 1e-16 * (1.0 + val)) break;
      for (double& v : gt) v /= ng;
      bool improved = false;
      for (int trial = 0; trial < 50; ++trial) {
        Vec a2 = axpy(-eta * radius, gt, a);
        normalize(a2);
        for (double& v : a2) v *= radius;
        double v2 = defect(a2);
        if (v2 < val) {
          a = std::move(a2);
          val = v2;
          eta = std::min(eta * 1.6, 1.0);
          improved = true;
          break;
        }
        eta *= 0.5;
        if (eta < 1e-15) break;
      }
      if (!improved) break;
    }
    double step = 0.25;
    while (step > 1e-13) {
      bool improved = false;
      for (int i = 0; i < D && !improved; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vec a2 = a;
          a2[i] += sgn * step * radius;
          normalize(a2);
          for (double& v : a2) v *= radius;
          double v2 = defect(a2);
          if (v2 < val) {
            a = std::move(a2);
            val = v2;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (val < best) {
      best = val;
      best_a = a;
    }
  };

  for (int i = 0; i < D; ++i) {
    Vec e(D, 0.0);
    e[i] = 1.0;
    polish(e);
  }
  SphereSequence seq(D, seed);
  for (int i = 0; i < budget; ++i) polish(seq.next());

  BalancedResidual out;
  out.residual = best;
  Matrix A(dX, dY);
  A.data() = best_a;
  out.witness.A = A;
  out.witness.B = A.scaled(ratio);
  eigenspace_element(p, dX, dY, A, ratio, out.witness.H, out.witness.K);
  out.witness.rayleigh = sx * sx + sy * sy;
  return out;
}

NuclearBalanceReport nuclear_balance_check(const FactorPair& p) {
  require_global_minimum(p, "nuclear_balance_check");
  NuclearBalanceReport rep;
  double fx = p.X.frobenius(), fy = p.Y.frobenius();
  double nuc = 0.0;
  for (double s : p.svd_M.sigma) nuc += s;
  rep.nuclear_gap = fx * fx + fy * fy - 2.0 * nuc;
  rep.balance_norm = p.balance.frobenius();
  double scale = 1.0 + 2.0 * nuc;
  rep.frobenius_optimal = rep.nuclear_gap <= 1e-8 * scale && rep.balance_norm <= 1e-8 * scale;
  return rep;
}

L1FlatAnalysis l1_flat_analysis(double a, double b) {
  L1FlatAnalysis out;
  double s = std::abs(a) + std::abs(b);
  out.lip_sq = [s](double t) { return 2.0 / (t * t) + s * s * t * t; };
  if (s == 0.0) {
    out.flat_points = {Vec{0.0, 0.0, 0.0}};
    return out;
  }
  out.t_star = std::sqrt(std::sqrt(2.0) / s);
  out.lip_sq_at_t_star = out.lip_sq(out.t_star);
  Vec flat{a * out.t_star, b * out.t_star, 1.0 / out.t_star};
  out.flat_points = {flat, scaled(flat, -1.0)};

  // numeric confirmation against the calculus module on the 3-variable handle
  ObjectiveHandle h = build_catalog_objective("mf1_ab", {a, b});
  for (double t : {0.5, 1.0, 2.0, out.t_star}) {
    Vec xt{a * t, b * t, 1.0 / t};
    FlatnessCoefficient lip = lipschitz_modulus(h, xt);
    out.max_formula_error =
        std::max(out.max_formula_error, std::abs(lip.value * lip.value - out.lip_sq(t)));
  }
  // grid argmin of the closed-form curve vs the closed-form t*
  double best_t = out.t_star, best_v = out.lip_sq_at_t_star;
  for (int i = 0; i <= 4000; ++i) {
    double t = 0.05 * std::pow(400.0, i / 4000.0);
    double v = out.lip_sq(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  out.t_star_check_error = std::abs(best_t - out.t_star);
  return out;
}

namespace {

double abs_poly_deriv_right(const Poly& p, int k) {
  double s = 1.0;
  for (double c : p.c) {
    if (c != 0.0) {
      s = c > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return s * p.deriv_at_zero(k);
}

Matrix matfac_inner_jacobian(const Matrix& X, const Matrix& Y, int m, int n, int r) {
  Matrix J(m * n, m * r + r * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      int row = i * n + j;
      for (int b = 0; b < r; ++b) J(row, i * r + b) = Y(b, j);
      for (int a = 0; a < r; ++a) J(row, m * r + a * n + j) = X(i, a);
    }
  return J;
}

}  // namespace

ObjectiveHandle matfac_frobenius_objective(const Matrix& M, int r) {
  const int m = M.rows(), n = M.cols();
  ObjectiveHandle h;
  h.dim = m * r + r * n;
  h.eval = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    Matrix R = X.mul(Y) - M;
    double f = R.frobenius();
    return 0.5 * f * f;
  };
  h.grad = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    Matrix R = X.mul(Y) - M;
    return pack_pair(R.mul(Y.transpose()), X.transpose().mul(R));
  };
  h.hess_vec = [M, m, n, r](const Vec& z, const Vec& v) {
    Matrix X, Y, H, K;
    unpack_pair(z, m, n, r, X, Y);
    unpack_pair(v, m, n, r, H, K);
    Matrix R = X.mul(Y) - M;
    Matrix P = H.mul(Y) + X.mul(K);
    return pack_pair(P.mul(Y.transpose()) + R.mul(K.transpose()),
                     X.transpose().mul(P) + H.transpose().mul(R));
  };
  h.dir_deriv_k = [M, m, n, r](const Vec& z, const Vec& v, int k) {
    Matrix X, Y, H, K;
    unpack_pair(z, m, n, r, X, Y);
    unpack_pair(v, m, n, r, H, K);
    Matrix R = X.mul(Y) - M;
    Matrix P = H.mul(Y) + X.mul(K);
    Matrix Q = H.mul(K);
    // 0.5 || R + t P + t^2 Q ||_F^2
    Poly p;
    p.c = {0.5 * frobenius_inner(R, R), frobenius_inner(R, P),
           0.5 * frobenius_inner(P, P) + frobenius_inner(R, Q), frobenius_inner(P, Q),
           0.5 * frobenius_inner(Q, Q)};
    return p.deriv_at_zero(k);
  };
  Composite comp;
  comp.outer = OuterKind::sq_frobenius;
  comp.out_dim = m * n;
  comp.inner = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    return (X.mul(Y) - M).data();
  };
  comp.jacobian = [m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    return matfac_inner_jacobian(X, Y, m, n, r);
  };
  h.composite = comp;
  return h;
}

ObjectiveHandle matfac_l1_objective(const Matrix& M, int r) {
  const int m = M.rows(), n = M.cols();
  ObjectiveHandle h;
  h.dim = m * r + r * n;
  h.smoothness = Smoothness::lipschitz;
  h.eval = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    Matrix R = X.mul(Y) - M;
    double s = 0.0;
    for (double e : R.data()) s += std::abs(e);
    return s;
  };
  h.grad = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    Matrix R = X.mul(Y) - M;
    Matrix S(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) S(i, j) = R(i, j) >= 0.0 ? 1.0 : -1.0;
    return pack_pair(S.mul(Y.transpose()), X.transpose().mul(S));
  };
  h.dir_deriv_k = [M, m, n, r](const Vec& z, const Vec& v, int k) {
    Matrix X, Y, H, K;
    unpack_pair(z, m, n, r, X, Y);
    unpack_pair(v, m, n, r, H, K);
    Matrix R = X.mul(Y) - M;
    Matrix P = H.mul(Y) + X.mul(K);
    Matrix Q = H.mul(K);
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        Poly p{{R(i, j), P(i, j), Q(i, j)}};
        s += abs_poly_deriv_right(p, k);
      }
    return s;
  };
  h.nonsmooth_margin = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    Matrix R = X.mul(Y) - M;
    double mn = 1e300;
    for (double e : R.data()) mn = std::min(mn, std::abs(e));
    return mn;
  };
  Composite comp;
  comp.outer = OuterKind::abs_sum;
  comp.out_dim = m * n;
  comp.inner = [M, m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    return (X.mul(Y) - M).data();
  };
  comp.jacobian = [m, n, r](const Vec& z) {
    Matrix X, Y;
    unpack_pair(z, m, n, r, X, Y);
    return matfac_inner_jacobian(X, Y, m, n, r);
  };
  h.composite = comp;
  return h;
}

}  // namespace flatlab

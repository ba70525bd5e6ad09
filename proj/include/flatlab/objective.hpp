#pragma once

#include <functional>
#include <optional>
#include <string>

#include "flatlab/linalg.hpp"

namespace flatlab {

enum class Smoothness { smooth, piecewise_smooth, lipschitz };

enum class OuterKind { abs_sum, pow_k_over_k, sq_frobenius };

/// Composite structure f = outer(F(x)). outer is one of
///   abs_sum:       sum_i |u_i|
///   pow_k_over_k:  |u|^k / k
///   sq_frobenius:  |u|^2 / 2
/// The stored inner map satisfies eval(x) == outer(F(x)) exactly.
struct Composite {
  OuterKind outer = OuterKind::sq_frobenius;
  int power = 2;  // exponent k of pow_k_over_k
  int out_dim = 1;
  std::function<Vec(const Vec&)> inner;
  std::function<Matrix(const Vec&)> jacobian;  // F'(x), out_dim x n

  double outer_eval(const Vec& u) const;
};

/// Uniform objective abstraction: value plus optional analytic oracles.
/// All oracles are pure; a handle is immutable after construction and safe to
/// share across threads.
struct ObjectiveHandle {
  int dim = 0;
  Smoothness smoothness = Smoothness::smooth;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;                             // optional
  std::function<Vec(const Vec&, const Vec&)> hess_vec;             // optional
  std::function<double(const Vec&, const Vec&, int)> dir_deriv_k;  // f^(k)(x)v^k, optional
  std::function<double(const Vec&)> nonsmooth_margin;  // > 0 away from kinks, optional
  std::optional<Composite> composite;

  bool has_grad() const { return static_cast<bool>(grad); }
  bool has_hess_vec() const { return static_cast<bool>(hess_vec); }
  bool has_dir_deriv() const { return static_cast<bool>(dir_deriv_k); }

  double operator()(const Vec& x) const { return eval(x); }
  /// Analytic gradient if present, central finite differences otherwise.
  Vec gradient(const Vec& x) const;
  /// Analytic Hessian-vector product if present, FD of the gradient otherwise.
  Vec hessian_vec(const Vec& x, const Vec& v) const;
  /// f^(k)(x)v^k: analytic if present, high-order central stencil otherwise.
  double dir_deriv(const Vec& x, const Vec& v, int k) const;
  double margin(const Vec& x) const { return nonsmooth_margin ? nonsmooth_margin(x) : 1e300; }
};

/// Central-difference estimate of d^k/dt^k f(x+tv)|_0 for k in 1..4 using a
/// width 2k+1 stencil with step h = eps^(1/(k+2)) * (1 + |x|).
double finite_difference_dir_deriv(const ObjectiveHandle& f, const Vec& x, const Vec& v, int k);

Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                               double h);

}  // namespace flatlab

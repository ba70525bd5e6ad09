#include "flatlab/catalog.hpp"

#include <cmath>

#include "flatlab/matfac.hpp"

namespace flatlab {

namespace {

double relu(double t) { return t > 0.0 ? t : 0.0; }
// one-sided kink convention: derivative taken from the t > 0 side
double relu_prime(double t) { return t >= 0.0 ? 1.0 : 0.0; }

Poly affine(double a0, double a1) { return Poly::affine(a0, a1); }

// |p(t)| near t = 0+, differentiated as s*p with s the sign of the first
// nonzero coefficient (the t > 0 side at kinks).
double abs_poly_deriv(const Poly& p, int k) {
  double s = 1.0;
  for (double c : p.c) {
    if (c != 0.0) {
      s = c > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return s * p.deriv_at_zero(k);
}

void check_arity(const std::string& name, const Vec& params, size_t want) {
  if (params.size() != want)
    throw validation_error("catalog '" + name + "': expected " + std::to_string(want) +
                           " parameter(s), got " + std::to_string(params.size()));
}

// x^u and its partials with exponent bookkeeping that is safe at zeros
double monomial_value(const Vec& x, const std::vector<int>& u) {
  double p = 1.0;
  for (size_t i = 0; i < x.size(); ++i)
    for (int e = 0; e < u[i]; ++e) p *= x[i];
  return p;
}

double monomial_partial(const Vec& x, const std::vector<int>& u, size_t i) {
  double p = static_cast<double>(u[i]);
  for (size_t j = 0; j < x.size(); ++j) {
    int e = u[j] - (j == i ? 1 : 0);
    for (int k = 0; k < e; ++k) p *= x[j];
  }
  return p;
}

double monomial_second(const Vec& x, const std::vector<int>& u, size_t i, size_t j) {
  double coef = (i == j) ? static_cast<double>(u[i]) * (u[i] - 1)
                         : static_cast<double>(u[i]) * u[j];
  if (coef == 0.0) return 0.0;
  double p = coef;
  for (size_t l = 0; l < x.size(); ++l) {
    int e = u[l] - (l == i ? 1 : 0) - (l == j ? 1 : 0);
    for (int k = 0; k < e; ++k) p *= x[l];
  }
  return p;
}

std::vector<int> to_exponents(const Vec& params) {
  std::vector<int> u;
  u.reserve(params.size());
  for (double p : params) {
    double r = std::round(p);
    if (!(r >= 1.0) || std::abs(p - r) > 1e-9)
      throw validation_error("catalog 'monomial': exponents must be positive integers");
    u.push_back(static_cast<int>(r));
  }
  return u;
}

ObjectiveHandle build_nn(const Vec&) {
  ObjectiveHandle h;
  h.dim = 3;
  h.smoothness = Smoothness::piecewise_smooth;
  auto F = [](const Vec& x) { return x[1] * relu(x[0]) + x[2] - 1.0; };
  h.eval = [F](const Vec& x) {
    double v = F(x);
    return v * v;
  };
  h.grad = [F](const Vec& x) {
    double v = F(x);
    return Vec{2.0 * v * x[1] * relu_prime(x[0]), 2.0 * v * relu(x[0]), 2.0 * v};
  };
  h.hess_vec = [F](const Vec& x, const Vec& v) {
    double rp = relu_prime(x[0]);
    Vec gF{x[1] * rp, relu(x[0]), 1.0};
    double fv = F(x);
    double gFv = dot(gF, v);
    // hess F has only the (1,2)/(2,1) block, equal to relu'(x1)
    Vec hFv{rp * v[1], rp * v[0], 0.0};
    Vec out(3);
    for (int i = 0; i < 3; ++i) out[i] = 2.0 * gFv * gF[i] + 2.0 * fv * hFv[i];
    return out;
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    Poly ramp = x[0] > 0.0   ? affine(x[0], v[0])
                : x[0] < 0.0 ? Poly::constant(0.0)
                : (v[0] > 0.0 ? affine(0.0, v[0]) : Poly::constant(0.0));
    Poly F = affine(x[1], v[1]) * ramp + affine(x[2] - 1.0, v[2]);
    return (F * F).deriv_at_zero(k);
  };
  h.nonsmooth_margin = [](const Vec& x) { return std::abs(x[0]); };
  Composite comp;
  comp.outer = OuterKind::sq_frobenius;
  comp.out_dim = 1;
  const double s2 = std::sqrt(2.0);
  comp.inner = [F, s2](const Vec& x) { return Vec{s2 * F(x)}; };
  comp.jacobian = [s2](const Vec& x) {
    Matrix j(1, 3);
    j(0, 0) = s2 * x[1] * relu_prime(x[0]);
    j(0, 1) = s2 * relu(x[0]);
    j(0, 2) = s2;
    return j;
  };
  h.composite = comp;
  return h;
}

ObjectiveHandle build_mf4(const Vec&) {
  ObjectiveHandle h;
  h.dim = 2;
  auto F = [](const Vec& x) { return x[0] * x[1] - 1.0; };
  h.eval = [F](const Vec& x) {
    double v = F(x);
    return v * v * v * v;
  };
  h.grad = [F](const Vec& x) {
    double c = 4.0 * std::pow(F(x), 3);
    return Vec{c * x[1], c * x[0]};
  };
  h.hess_vec = [F](const Vec& x, const Vec& v) {
    double fv = F(x);
    double a = 12.0 * fv * fv;
    double b = 4.0 * fv * fv * fv;
    double gv = x[1] * v[0] + x[0] * v[1];
    return Vec{a * x[1] * gv + b * v[1], a * x[0] * gv + b * v[0]};
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    Poly F = affine(x[0], v[0]) * affine(x[1], v[1]) - Poly::constant(1.0);
    return pow(F, 4).deriv_at_zero(k);
  };
  Composite comp;
  comp.outer = OuterKind::pow_k_over_k;
  comp.power = 4;
  comp.out_dim = 1;
  const double s2 = std::sqrt(2.0);
  comp.inner = [F, s2](const Vec& x) { return Vec{s2 * F(x)}; };
  comp.jacobian = [s2](const Vec& x) {
    Matrix j(1, 2);
    j(0, 0) = s2 * x[1];
    j(0, 1) = s2 * x[0];
    return j;
  };
  h.composite = comp;
  return h;
}

ObjectiveHandle build_4th(const Vec&) {
  ObjectiveHandle h;
  h.dim = 2;
  h.eval = [](const Vec& x) { return x[1] * x[1] + x[0] * x[0] * std::pow(x[1], 4); };
  h.grad = [](const Vec& x) {
    return Vec{2.0 * x[0] * std::pow(x[1], 4),
               2.0 * x[1] + 4.0 * x[0] * x[0] * std::pow(x[1], 3)};
  };
  h.hess_vec = [](const Vec& x, const Vec& v) {
    double h11 = 2.0 * std::pow(x[1], 4);
    double h12 = 8.0 * x[0] * std::pow(x[1], 3);
    double h22 = 2.0 + 12.0 * x[0] * x[0] * x[1] * x[1];
    return Vec{h11 * v[0] + h12 * v[1], h12 * v[0] + h22 * v[1]};
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    Poly x1 = affine(x[0], v[0]), x2 = affine(x[1], v[1]);
    Poly p = x2 * x2 + x1 * x1 * pow(x2, 4);
    return p.deriv_at_zero(k);
  };
  Composite comp;
  comp.outer = OuterKind::sq_frobenius;
  comp.out_dim = 2;
  const double s2 = std::sqrt(2.0);
  comp.inner = [s2](const Vec& x) { return Vec{s2 * x[1], s2 * x[0] * x[1] * x[1]}; };
  comp.jacobian = [s2](const Vec& x) {
    Matrix j(2, 2);
    j(0, 1) = s2;
    j(1, 0) = s2 * x[1] * x[1];
    j(1, 1) = s2 * 2.0 * x[0] * x[1];
    return j;
  };
  h.composite = comp;
  return h;
}

ObjectiveHandle build_absprod(const Vec&) {
  ObjectiveHandle h;
  h.dim = 2;
  h.smoothness = Smoothness::lipschitz;
  auto F = [](const Vec& x) { return x[0] * x[1] - 1.0; };
  h.eval = [F](const Vec& x) { return std::abs(F(x)); };
  h.grad = [F](const Vec& x) {
    double s = F(x) >= 0.0 ? 1.0 : -1.0;
    return Vec{s * x[1], s * x[0]};
  };
  h.hess_vec = [F](const Vec& x, const Vec& v) {
    double s = F(x) >= 0.0 ? 1.0 : -1.0;
    return Vec{s * v[1], s * v[0]};
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    Poly F = affine(x[0], v[0]) * affine(x[1], v[1]) - Poly::constant(1.0);
    return abs_poly_deriv(F, k);
  };
  h.nonsmooth_margin = [F](const Vec& x) { return std::abs(F(x)); };
  Composite comp;
  comp.outer = OuterKind::abs_sum;
  comp.out_dim = 1;
  comp.inner = [F](const Vec& x) { return Vec{F(x)}; };
  comp.jacobian = [](const Vec& x) {
    Matrix j(1, 2);
    j(0, 0) = x[1];
    j(0, 1) = x[0];
    return j;
  };
  h.composite = comp;
  return h;
}

ObjectiveHandle build_orthogonal(const Vec& a) {
  if (a.empty()) throw validation_error("catalog 'orthogonal': needs at least one coefficient");
  int n = static_cast<int>(a.size());
  ObjectiveHandle h;
  h.dim = n;
  auto F = [a](const Vec& x) {
    double s = -1.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i] * x[i];
    return s;
  };
  h.eval = [F](const Vec& x) {
    double v = F(x);
    return v * v;
  };
  h.grad = [F, a, n](const Vec& x) {
    double c = 4.0 * F(x);
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = c * a[i] * x[i];
    return g;
  };
  h.hess_vec = [F, a, n](const Vec& x, const Vec& v) {
    double fv = F(x);
    double gFv = 0.0;
    for (int i = 0; i < n; ++i) gFv += 2.0 * a[i] * x[i] * v[i];
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = 2.0 * gFv * 2.0 * a[i] * x[i] + 4.0 * fv * a[i] * v[i];
    return out;
  };
  h.dir_deriv_k = [a](const Vec& x, const Vec& v, int k) {
    Poly F = Poly::constant(-1.0);
    for (size_t i = 0; i < a.size(); ++i) {
      Poly xi = affine(x[i], v[i]);
      F = F + (xi * xi) * Poly::constant(a[i]);
    }
    return (F * F).deriv_at_zero(k);
  };
  Composite comp;
  comp.outer = OuterKind::sq_frobenius;
  comp.out_dim = 1;
  const double s2 = std::sqrt(2.0);
  comp.inner = [F, s2](const Vec& x) { return Vec{s2 * F(x)}; };
  comp.jacobian = [a, s2, n](const Vec& x) {
    Matrix j(1, n);
    for (int i = 0; i < n; ++i) j(0, i) = s2 * 2.0 * a[i] * x[i];
    return j;
  };
  h.composite = comp;
  return h;
}

std::vector<Vec> orthogonal_flat_minima(const Vec& a) {
  int n = static_cast<int>(a.size());
  int best = -1;
  for (int i = 0; i < n; ++i)
    if (a[i] > 0.0 && (best < 0 || a[i] < a[best])) best = i;
  if (best < 0) return {};  // no positive coefficient: no zero level set
  Vec p(n, 0.0), m(n, 0.0);
  p[best] = 1.0 / std::sqrt(a[best]);
  m[best] = -p[best];
  return {p, m};
}

ObjectiveHandle build_mf1_ab(const Vec& params) {
  check_arity("mf1_ab", params, 2);
  double a = params[0], b = params[1];
  ObjectiveHandle h;
  h.dim = 3;
  h.smoothness = Smoothness::lipschitz;
  auto F1 = [a](const Vec& x) { return x[0] * x[2] - a; };
  auto F2 = [b](const Vec& x) { return x[1] * x[2] - b; };
  h.eval = [F1, F2](const Vec& x) { return std::abs(F1(x)) + std::abs(F2(x)); };
  h.grad = [F1, F2](const Vec& x) {
    double s1 = F1(x) >= 0.0 ? 1.0 : -1.0;
    double s2 = F2(x) >= 0.0 ? 1.0 : -1.0;
    return Vec{s1 * x[2], s2 * x[2], s1 * x[0] + s2 * x[1]};
  };
  h.hess_vec = [F1, F2](const Vec& x, const Vec& v) {
    double s1 = F1(x) >= 0.0 ? 1.0 : -1.0;
    double s2 = F2(x) >= 0.0 ? 1.0 : -1.0;
    return Vec{s1 * v[2], s2 * v[2], s1 * v[0] + s2 * v[1]};
  };
  h.dir_deriv_k = [a, b](const Vec& x, const Vec& v, int k) {
    Poly f1 = affine(x[0], v[0]) * affine(x[2], v[2]) - Poly::constant(a);
    Poly f2 = affine(x[1], v[1]) * affine(x[2], v[2]) - Poly::constant(b);
    return abs_poly_deriv(f1, k) + abs_poly_deriv(f2, k);
  };
  h.nonsmooth_margin = [F1, F2](const Vec& x) {
    return std::min(std::abs(F1(x)), std::abs(F2(x)));
  };
  Composite comp;
  comp.outer = OuterKind::abs_sum;
  comp.out_dim = 2;
  comp.inner = [F1, F2](const Vec& x) { return Vec{F1(x), F2(x)}; };
  comp.jacobian = [](const Vec& x) {
    Matrix j(2, 3);
    j(0, 0) = x[2];
    j(0, 2) = x[0];
    j(1, 1) = x[2];
    j(1, 2) = x[1];
    return j;
  };
  h.composite = comp;
  return h;
}

std::vector<Vec> mf1_ab_flat_minima(const Vec& params) {
  double a = params[0], b = params[1];
  double s = std::abs(a) + std::abs(b);
  if (s == 0.0) return {Vec{0.0, 0.0, 0.0}};
  double t = std::sqrt(std::sqrt(2.0) / s);
  Vec p{a * t, b * t, 1.0 / t};
  return {p, scaled(p, -1.0)};
}

ObjectiveHandle build_monomial(const Vec& params) {
  std::vector<int> u = to_exponents(params);
  if (u.empty()) throw validation_error("catalog 'monomial': needs at least one exponent");
  int n = static_cast<int>(u.size());
  ObjectiveHandle h;
  h.dim = n;
  auto F = [u](const Vec& x) { return monomial_value(x, u) - 1.0; };
  h.eval = [F](const Vec& x) {
    double v = F(x);
    return v * v;
  };
  h.grad = [F, u, n](const Vec& x) {
    double c = 2.0 * F(x);
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = c * monomial_partial(x, u, i);
    return g;
  };
  h.hess_vec = [F, u, n](const Vec& x, const Vec& v) {
    double fv = F(x);
    Vec gF(n);
    for (int i = 0; i < n; ++i) gF[i] = monomial_partial(x, u, i);
    double gFv = dot(gF, v);
    Vec out(n);
    for (int i = 0; i < n; ++i) {
      double hFv = 0.0;
      for (int j = 0; j < n; ++j) hFv += monomial_second(x, u, i, j) * v[j];
      out[i] = 2.0 * gFv * gF[i] + 2.0 * fv * hFv;
    }
    return out;
  };
  h.dir_deriv_k = [u](const Vec& x, const Vec& v, int k) {
    Poly F = Poly::constant(1.0);
    for (size_t i = 0; i < u.size(); ++i) F = F * pow(affine(x[i], v[i]), u[i]);
    F = F - Poly::constant(1.0);
    return (F * F).deriv_at_zero(k);
  };
  Composite comp;
  comp.outer = OuterKind::sq_frobenius;
  comp.out_dim = 1;
  const double s2 = std::sqrt(2.0);
  comp.inner = [F, s2](const Vec& x) { return Vec{s2 * F(x)}; };
  comp.jacobian = [u, s2, n](const Vec& x) {
    Matrix j(1, n);
    for (int i = 0; i < n; ++i) j(0, i) = s2 * monomial_partial(x, u, i);
    return j;
  };
  h.composite = comp;
  return h;
}

std::vector<Vec> monomial_flat_minima(const Vec& params) {
  std::vector<int> u = to_exponents(params);
  double log_prod = 0.0, norm1 = 0.0;
  for (int e : u) {
    log_prod += e * std::log(static_cast<double>(e));
    norm1 += e;
  }
  double denom = std::exp(log_prod / (2.0 * norm1));
  Vec p(u.size());
  for (size_t i = 0; i < u.size(); ++i) p[i] = std::sqrt(static_cast<double>(u[i])) / denom;
  return {p};
}

ObjectiveHandle build_quadform(const Vec& d) {
  if (d.empty()) throw validation_error("catalog 'quadform': needs at least one weight");
  int n = static_cast<int>(d.size());
  ObjectiveHandle h;
  h.dim = n;
  h.eval = [d](const Vec& x) {
    double s = 0.0;
    for (size_t i = 0; i < d.size(); ++i) s += d[i] * x[i] * x[i];
    return 0.5 * s;
  };
  h.grad = [d, n](const Vec& x) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = d[i] * x[i];
    return g;
  };
  h.hess_vec = [d, n](const Vec&, const Vec& v) {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = d[i] * v[i];
    return out;
  };
  h.dir_deriv_k = [d](const Vec& x, const Vec& v, int k) {
    if (k == 1) {
      double s = 0.0;
      for (size_t i = 0; i < d.size(); ++i) s += d[i] * x[i] * v[i];
      return s;
    }
    if (k == 2) {
      double s = 0.0;
      for (size_t i = 0; i < d.size(); ++i) s += d[i] * v[i] * v[i];
      return s;
    }
    return 0.0;
  };
  return h;
}

ObjectiveHandle build_l1norm(const Vec& params) {
  check_arity("l1norm", params, 1);
  int n = static_cast<int>(std::round(params[0]));
  if (n < 1 || std::abs(params[0] - n) > 1e-9)
    throw validation_error("catalog 'l1norm': dimension must be a positive integer");
  ObjectiveHandle h;
  h.dim = n;
  h.smoothness = Smoothness::lipschitz;
  h.eval = [](const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  };
  h.grad = [n](const Vec& x) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = x[i] >= 0.0 ? 1.0 : -1.0;
    return g;
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += abs_poly_deriv(affine(x[i], v[i]), k);
    return s;
  };
  h.nonsmooth_margin = [](const Vec& x) {
    double m = 1e300;
    for (double v : x) m = std::min(m, std::abs(v));
    return m;
  };
  Composite comp;
  comp.outer = OuterKind::abs_sum;
  comp.out_dim = n;
  comp.inner = [](const Vec& x) { return x; };
  comp.jacobian = [n](const Vec&) { return Matrix::identity(n); };
  h.composite = comp;
  return h;
}

ObjectiveHandle build_quartic_line(const Vec&) {
  ObjectiveHandle h;
  h.dim = 3;
  h.eval = [](const Vec& x) {
    return x[0] * x[0] + std::pow(x[1], 4) * (1.0 + x[2] * x[2]);
  };
  h.grad = [](const Vec& x) {
    return Vec{2.0 * x[0], 4.0 * std::pow(x[1], 3) * (1.0 + x[2] * x[2]),
               2.0 * std::pow(x[1], 4) * x[2]};
  };
  h.hess_vec = [](const Vec& x, const Vec& v) {
    double h22 = 12.0 * x[1] * x[1] * (1.0 + x[2] * x[2]);
    double h23 = 8.0 * std::pow(x[1], 3) * x[2];
    double h33 = 2.0 * std::pow(x[1], 4);
    return Vec{2.0 * v[0], h22 * v[1] + h23 * v[2], h23 * v[1] + h33 * v[2]};
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    Poly x1 = affine(x[0], v[0]), x2 = affine(x[1], v[1]), x3 = affine(x[2], v[2]);
    Poly p = x1 * x1 + pow(x2, 4) * (Poly::constant(1.0) + x3 * x3);
    return p.deriv_at_zero(k);
  };
  Composite comp;
  comp.outer = OuterKind::sq_frobenius;
  comp.out_dim = 2;
  const double s2 = std::sqrt(2.0);
  comp.inner = [s2](const Vec& x) {
    return Vec{s2 * x[0], s2 * x[1] * x[1] * std::sqrt(1.0 + x[2] * x[2])};
  };
  comp.jacobian = [s2](const Vec& x) {
    double w = std::sqrt(1.0 + x[2] * x[2]);
    Matrix j(2, 3);
    j(0, 0) = s2;
    j(1, 1) = s2 * 2.0 * x[1] * w;
    j(1, 2) = s2 * x[1] * x[1] * x[2] / w;
    return j;
  };
  h.composite = comp;
  return h;
}

ObjectiveHandle build_sextic_line(const Vec&) {
  ObjectiveHandle h;
  h.dim = 3;
  h.eval = [](const Vec& x) {
    return x[0] * x[0] + std::pow(x[1], 4) * (1.0 + x[2] * x[2]) +
           std::pow(x[0], 6) * (1.0 + (x[2] - 1.0) * (x[2] - 1.0));
  };
  h.grad = [](const Vec& x) {
    double w = 1.0 + (x[2] - 1.0) * (x[2] - 1.0);
    return Vec{2.0 * x[0] + 6.0 * std::pow(x[0], 5) * w,
               4.0 * std::pow(x[1], 3) * (1.0 + x[2] * x[2]),
               2.0 * std::pow(x[1], 4) * x[2] + 2.0 * std::pow(x[0], 6) * (x[2] - 1.0)};
  };
  h.dir_deriv_k = [](const Vec& x, const Vec& v, int k) {
    Poly x1 = affine(x[0], v[0]), x2 = affine(x[1], v[1]), x3 = affine(x[2], v[2]);
    Poly p = x1 * x1 + pow(x2, 4) * (Poly::constant(1.0) + x3 * x3) +
             pow(x1, 6) * (Poly::constant(1.0) + pow(x3 - Poly::constant(1.0), 2));
    return p.deriv_at_zero(k);
  };
  return h;
}

void check_matfac_params(const std::string& name, const Vec& params, int& m, int& n, int& r) {
  if (params.size() < 4)
    throw validation_error("catalog '" + name + "': parameters are [m, n, r, M entries...]");
  m = static_cast<int>(std::round(params[0]));
  n = static_cast<int>(std::round(params[1]));
  r = static_cast<int>(std::round(params[2]));
  if (m < 1 || n < 1 || r < 1)
    throw validation_error("catalog '" + name + "': m, n, r must be positive");
  if (params.size() != static_cast<size_t>(3 + m * n))
    throw validation_error("catalog '" + name + "': expected " + std::to_string(3 + m * n) +
                           " parameters for a " + std::to_string(m) + "x" + std::to_string(n) +
                           " target");
}

Matrix matfac_target(const Vec& params, int m, int n) {
  Matrix M(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = params[3 + i * n + j];
  return M;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    v.push_back({"nn", 0, "none; (x2 relu(x1) + x3 - 1)^2", build_nn, nullptr});
    v.push_back({"mf4", 0, "none; (x1 x2 - 1)^4", build_mf4,
                 [](const Vec&) { return std::vector<Vec>{{1.0, 1.0}, {-1.0, -1.0}}; }});
    v.push_back({"4th", 0, "none; x2^2 + x1^2 x2^4", build_4th,
                 [](const Vec&) { return std::vector<Vec>{{0.0, 0.0}}; }});
    v.push_back({"orthogonal", -1, "a_1..a_n; (sum a_i x_i^2 - 1)^2", build_orthogonal,
                 orthogonal_flat_minima});
    v.push_back({"mf1_ab", 2, "a, b; |x1 x3 - a| + |x2 x3 - b|", build_mf1_ab,
                 mf1_ab_flat_minima});
    v.push_back({"monomial", -1, "positive integer exponents; (x^u - 1)^2", build_monomial,
                 monomial_flat_minima});
    v.push_back({"absprod", 0, "none; |x1 x2 - 1|", build_absprod,
                 [](const Vec&) { return std::vector<Vec>{{1.0, 1.0}, {-1.0, -1.0}}; }});
    v.push_back({"quadform", -1, "diagonal weights; (1/2) sum d_i x_i^2", build_quadform, nullptr});
    v.push_back({"l1norm", 1, "dimension n; sum |x_i|", build_l1norm, nullptr});
    v.push_back({"quartic_line", 0, "none; x1^2 + x2^4 (1 + x3^2)", build_quartic_line, nullptr});
    v.push_back({"sextic_line", 0,
                 "none; x1^2 + x2^4 (1 + x3^2) + x1^6 (1 + (x3 - 1)^2)", build_sextic_line,
                 nullptr});
    v.push_back({"matfac_fro", -1, "m, n, r, M entries; ||XY - M||_F^2 / 2",
                 [](const Vec& params) {
                   int m, n, r;
                   check_matfac_params("matfac_fro", params, m, n, r);
                   return matfac_frobenius_objective(matfac_target(params, m, n), r);
                 },
                 nullptr});
    v.push_back({"matfac_l1", -1, "m, n, r, M entries; ||XY - M||_1",
                 [](const Vec& params) {
                   int m, n, r;
                   check_matfac_params("matfac_l1", params, m, n, r);
                   return matfac_l1_objective(matfac_target(params, m, n), r);
                 },
                 nullptr});
    return v;
  }();
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

ObjectiveHandle build_catalog_objective(const std::string& name, const Vec& params) {
  const CatalogEntry* e = find_catalog_entry(name);
  if (!e) throw validation_error("unknown catalog name: '" + name + "'");
  if (e->arity >= 0 && static_cast<int>(params.size()) != e->arity)
    throw validation_error("catalog '" + name + "': expected " + std::to_string(e->arity) +
                           " parameter(s), got " + std::to_string(params.size()));
  return e->build(params);
}

std::vector<Vec> catalog_flat_minima(const std::string& name, const Vec& params) {
  const CatalogEntry* e = find_catalog_entry(name);
  if (!e) throw validation_error("unknown catalog name: '" + name + "'");
  if (!e->flat_minima) return {};
  return e->flat_minima(params);
}

std::vector<std::pair<std::string, Vec>> catalog_2d_instances() {
  return {
      {"mf4", {}},          {"4th", {}},           {"absprod", {}},
      {"quadform", {3, 1}}, {"orthogonal", {1, 2}}, {"monomial", {1, 1}},
      {"l1norm", {2}},
  };
}

std::vector<SmoothInstance> catalog_smooth_instances() {
  const double c = std::pow(2.0, 1.0 / 6.0);  // monomial (2,1) flat coordinates
  std::vector<SmoothInstance> v = {
      {"mf4", {}, {1.0, 1.0}},
      {"4th", {}, {0.0, 0.0}},
      {"orthogonal", {1, 2}, {1.0, 0.0}},
      {"monomial", {1, 1}, {1.0, 1.0}},
      {"monomial", {2, 1}, {c, 1.0 / (c * c)}},
      {"quadform", {3, 1}, {0.0, 0.0}},
      {"quartic_line", {}, {0.0, 0.0, 1.0}},
      {"sextic_line", {}, {0.0, 0.0, 1.0}},
  };
  // balanced factorization of diag(2, 1): X = Y = diag(sqrt(2), 1)
  Vec params{2, 2, 2, 2, 0, 0, 1};
  Vec base{std::sqrt(2.0), 0, 0, 1, std::sqrt(2.0), 0, 0, 1};
  v.push_back({"matfac_fro", params, base});
  return v;
}

}  // namespace flatlab

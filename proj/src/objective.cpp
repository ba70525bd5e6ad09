#include "flatlab/objective.hpp"

#include <cmath>
#include <limits>

namespace flatlab {

double Composite::outer_eval(const Vec& u) const {
  switch (outer) {
    case OuterKind::abs_sum: {
      double s = 0.0;
      for (double x : u) s += std::abs(x);
      return s;
    }
    case OuterKind::pow_k_over_k:
      return std::pow(nrm2(u), power) / power;
    case OuterKind::sq_frobenius:
      return 0.5 * dot(u, u);
  }
  return 0.0;
}

Vec ObjectiveHandle::gradient(const Vec& x) const {
  if (grad) return grad(x);
  return finite_difference_gradient(eval, x, 1e-6 * (1.0 + nrm2(x)));
}

Vec ObjectiveHandle::hessian_vec(const Vec& x, const Vec& v) const {
  if (hess_vec) return hess_vec(x, v);
  double vn = nrm2(v);
  if (vn == 0.0) return Vec(x.size(), 0.0);
  double h = 1e-6 * (1.0 + nrm2(x)) / vn;
  Vec gp = gradient(axpy(h, v, x));
  Vec gm = gradient(axpy(-h, v, x));
  Vec out = sub(gp, gm);
  for (double& e : out) e /= 2.0 * h;
  return out;
}

double ObjectiveHandle::dir_deriv(const Vec& x, const Vec& v, int k) const {
  if (dir_deriv_k) return dir_deriv_k(x, v, k);
  return finite_difference_dir_deriv(*this, x, v, k);
}

double finite_difference_dir_deriv(const ObjectiveHandle& f, const Vec& x, const Vec& v, int k) {
  if (k < 1 || k > 4) throw validation_error("finite_difference_dir_deriv: order must be 1..4");
  const double eps = std::numeric_limits<double>::epsilon();
  const double h = std::pow(eps, 1.0 / (k + 2)) * (1.0 + nrm2(x));

  auto at = [&](int i) { return f.eval(axpy(i * h, v, x)); };

  switch (k) {
    case 1:
      return (at(1) - at(-1)) / (2.0 * h);
    case 2:
      return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
    case 3:
      return (-13.0 / 8.0 * (at(1) - at(-1)) + (at(2) - at(-2)) - 1.0 / 8.0 * (at(3) - at(-3))) /
             (h * h * h);
    case 4: {
      static const double e1 = -122.0 / 15.0, e2 = 169.0 / 60.0, e3 = -2.0 / 5.0, e4 = 7.0 / 240.0;
      double s = 91.0 / 8.0 * at(0);
      s += e1 * (at(1) + at(-1));
      s += e2 * (at(2) + at(-2));
      s += e3 * (at(3) + at(-3));
      s += e4 * (at(4) + at(-4));
      return s / (h * h * h * h);
    }
  }
  return 0.0;
}

Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                               double h) {
  Vec g(x.size());
  Vec y(x);
  for (size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    y[i] = xi + h;
    double fp = f(y);
    y[i] = xi - h;
    double fm = f(y);
    y[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace flatlab

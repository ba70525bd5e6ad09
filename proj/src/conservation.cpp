#include "flatlab/conservation.hpp"

#include <algorithm>
#include <cmath>

#include "flatlab/calculus.hpp"
#include "flatlab/matfac.hpp"

namespace flatlab {

GeneratorSet make_generator_set(int n, std::vector<Matrix> generators) {
  GeneratorSet out;
  out.n = n;
  out.requested = static_cast<int>(generators.size());
  for (const Matrix& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw validation_error("make_generator_set: generator has wrong size");
  }
  out.generators = std::move(generators);
  // Frobenius-orthonormal basis of span{(A + A^T)/2} by modified Gram-Schmidt
  for (const Matrix& g : out.generators) {
    Matrix s = symmetrize(g);
    double orig = s.frobenius();
    for (const Matrix& b : out.sym_basis) {
      double proj = frobenius_inner(s, b);
      s = s - b.scaled(proj);
    }
    double res = s.frobenius();
    if (res > 1e-10 * (1.0 + orig)) out.sym_basis.push_back(s.scaled(1.0 / res));
    // below the pivot: numerically dependent on earlier generators; dropped,
    // rank() reports the detected dimension
  }
  return out;
}

GeneratorSet scaling_generators(const Vec& weights) {
  return make_generator_set(static_cast<int>(weights.size()), {Matrix::diag(weights)});
}

GeneratorSet monomial_generators(const std::vector<int>& upsilon) {
  int n = static_cast<int>(upsilon.size());
  std::vector<Matrix> gens;
  for (int i = 0; i + 1 < n; ++i) {
    Matrix d(n, n);
    d(i, i) = static_cast<double>(upsilon[n - 1]);
    d(n - 1, n - 1) = -static_cast<double>(upsilon[i]);
    gens.push_back(d);
  }
  return make_generator_set(n, std::move(gens));
}

GeneratorSet skew_generators(int n) {
  std::vector<Matrix> gens;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix g(n, n);
      g(i, j) = 1.0;
      g(j, i) = -1.0;
      gens.push_back(g);
    }
  return make_generator_set(n, std::move(gens));
}

GeneratorSet matfac_generators(int m, int n, int r) {
  int dim = m * r + r * n;
  std::vector<Matrix> gens;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      Matrix B(r, r);
      B(a, b) = 1.0;
      // realize (X, Y) -> (X B, -B Y) as a matrix in the packed coordinates
      Matrix G(dim, dim);
      for (int col = 0; col < dim; ++col) {
        Vec e(dim, 0.0);
        e[col] = 1.0;
        Matrix X, Y;
        unpack_pair(e, m, n, r, X, Y);
        Vec img = pack_pair(X.mul(B), B.mul(Y).scaled(-1.0));
        for (int row = 0; row < dim; ++row) G(row, col) = img[row];
      }
      gens.push_back(std::move(G));
    }
  return make_generator_set(dim, std::move(gens));
}

Vec ConservedQuantity::coeffs(const Vec& x) const {
  Vec q(gen.sym_basis.size());
  for (size_t j = 0; j < gen.sym_basis.size(); ++j) q[j] = dot(x, gen.sym_basis[j].mul(x));
  return q;
}

double ConservedQuantity::c(const Vec& x) const {
  Vec q = coeffs(x);
  double s = 0.0;
  for (size_t j = 0; j < q.size(); ++j) {
    double d = q[j] - anchor_coeffs[j];
    s += d * d;
  }
  return 0.25 * s;
}

Vec ConservedQuantity::grad_c(const Vec& x) const {
  Vec out(x.size(), 0.0);
  Vec q = coeffs(x);
  for (size_t j = 0; j < q.size(); ++j) {
    double w = q[j] - anchor_coeffs[j];
    if (w == 0.0) continue;
    Vec bx = gen.sym_basis[j].mul(x);
    for (size_t i = 0; i < out.size(); ++i) out[i] += w * bx[i];
  }
  return out;
}

ConservedQuantity build_conserved(const GeneratorSet& gen, const std::optional<Vec>& anchor) {
  ConservedQuantity cq;
  cq.gen = gen;
  cq.anchor = anchor;
  if (anchor) {
    if (static_cast<int>(anchor->size()) != gen.n)
      throw validation_error("build_conserved: anchor dimension mismatch");
    cq.anchor_coeffs = cq.coeffs(*anchor);
  } else {
    cq.anchor_coeffs.assign(gen.sym_basis.size(), 0.0);
  }
  return cq;
}

FlowField parse_flow_field(const std::string& name) {
  if (name == "grad_c") return FlowField::grad_c;
  if (name == "neg_grad_c") return FlowField::neg_grad_c;
  if (name == "neg_grad_f") return FlowField::neg_grad_f;
  throw validation_error("unknown flow field '" + name + "'");
}

std::string flow_field_name(FlowField f) {
  switch (f) {
    case FlowField::grad_c: return "grad_c";
    case FlowField::neg_grad_c: return "neg_grad_c";
    case FlowField::neg_grad_f: return "neg_grad_f";
  }
  return "?";
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::time_limit: return "time_limit";
    case Termination::gradient_small: return "gradient_small";
    case Termination::diverged: return "diverged";
  }
  return "?";
}

namespace {

Vec rk4_step(const std::function<Vec(const Vec&)>& field, const Vec& x, double h) {
  Vec k1 = field(x);
  Vec k2 = field(axpy(0.5 * h, k1, x));
  Vec k3 = field(axpy(0.5 * h, k2, x));
  Vec k4 = field(axpy(h, k3, x));
  Vec out(x);
  for (size_t i = 0; i < x.size(); ++i)
    out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// full step vs two half steps; halve recursively until they agree
Vec adaptive_step(const std::function<Vec(const Vec&)>& field, const Vec& x, double h,
                  double tol, int depth, int max_depth) {
  Vec full = rk4_step(field, x, h);
  Vec half = rk4_step(field, rk4_step(field, x, 0.5 * h), 0.5 * h);
  if (depth >= max_depth || nrm_inf(sub(full, half)) <= tol) return half;
  Vec mid = adaptive_step(field, x, 0.5 * h, tol, depth + 1, max_depth);
  return adaptive_step(field, mid, 0.5 * h, tol, depth + 1, max_depth);
}

}  // namespace

TrajectoryRecord flow_integrate(FlowField field, const ObjectiveHandle& f,
                                const ConservedQuantity* cq, const Vec& x0,
                                const FlowOptions& opt) {
  if (opt.dt <= 0.0) throw validation_error("flow_integrate: dt must be positive");
  if (opt.t_end < 0.0) throw validation_error("flow_integrate: t_end must be nonnegative");
  if ((field == FlowField::grad_c || field == FlowField::neg_grad_c) && !cq)
    throw validation_error("flow_integrate: conserved-quantity fields need a ConservedQuantity");

  std::function<Vec(const Vec&)> drive;
  switch (field) {
    case FlowField::grad_c:
      drive = [cq](const Vec& x) { return cq->grad_c(x); };
      break;
    case FlowField::neg_grad_c:
      drive = [cq](const Vec& x) { return scaled(cq->grad_c(x), -1.0); };
      break;
    case FlowField::neg_grad_f:
      drive = [&f](const Vec& x) { return scaled(f.gradient(x), -1.0); };
      break;
  }

  Vec record_times = opt.record_times;
  if (record_times.empty()) {
    for (double t = 0.0; t < opt.t_end - 1e-12; t += opt.dt) record_times.push_back(t);
    record_times.push_back(opt.t_end);
  } else {
    std::sort(record_times.begin(), record_times.end());
    record_times.erase(std::unique(record_times.begin(), record_times.end()), record_times.end());
    if (record_times.empty() || record_times.front() > 1e-12)
      record_times.insert(record_times.begin(), 0.0);
    while (!record_times.empty() && record_times.back() > opt.t_end + 1e-12)
      record_times.pop_back();
    if (record_times.back() < opt.t_end - 1e-12) record_times.push_back(opt.t_end);
  }

  TrajectoryRecord tr;
  tr.step_size = opt.dt;
  tr.termination = Termination::time_limit;
  Vec x = x0;
  double t = 0.0;
  auto emit = [&](double time, const Vec& state) {
    tr.times.push_back(time);
    tr.states.push_back(state);
    tr.f_values.push_back(f.eval(state));
    if (cq) tr.c_values.push_back(cq->c(state));
  };
  emit(0.0, x);

  for (size_t k = 1; k < record_times.size(); ++k) {
    double target = record_times[k];
    bool stopped = false;
    while (t < target - 1e-12) {
      if (nrm2(drive(x)) < opt.gradient_floor) {
        tr.termination = Termination::gradient_small;
        stopped = true;
        break;
      }
      double h = std::min(opt.dt, target - t);
      Vec next = adaptive_step(drive, x, h, opt.step_tol, 0, opt.max_halvings);
      if (!all_finite(next) || nrm_inf(next) > opt.state_cap) {
        tr.termination = Termination::diverged;
        stopped = true;
        break;
      }
      x = std::move(next);
      t += h;
    }
    emit(t, x);
    if (stopped) return tr;
  }
  return tr;
}

double conservation_check(const TrajectoryRecord& tr, ConservedValue which) {
  const Vec& vals = which == ConservedValue::f_conserved ? tr.f_values : tr.c_values;
  if (vals.empty()) throw validation_error("conservation_check: no recorded values");
  double drift = 0.0;
  for (double v : vals) drift = std::max(drift, std::abs(v - vals.front()));
  return drift;
}

FlatteningReport flattening_check(TrajectoryRecord& tr, const ObjectiveHandle& f, int order,
                                  int budget, std::uint64_t seed) {
  FlatteningReport rep;
  rep.coefficients.resize(tr.states.size());
  for (size_t i = 0; i < tr.states.size(); ++i) {
    try {
      rep.coefficients[i] = flatness_coefficient(f, tr.states[i], order, budget, seed).value;
    } catch (const std::exception&) {
      rep.failed_index = static_cast<int>(i);
      rep.coefficients.resize(i);
      tr.coeff_values = rep.coefficients;
      return rep;
    }
  }
  tr.coeff_values = rep.coefficients;
  rep.monotone = true;
  for (size_t i = 0; i + 1 < rep.coefficients.size(); ++i)
    if (rep.coefficients[i + 1] > rep.coefficients[i] + 1e-9) rep.monotone = false;
  // least-squares slope of log coefficient vs t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t i = 0; i < rep.coefficients.size(); ++i) {
    if (rep.coefficients[i] <= 0.0) continue;
    double lx = tr.times[i], ly = std::log(rep.coefficients[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt >= 2) {
    double denom = cnt * sxx - sx * sx;
    if (std::abs(denom) > 1e-300) rep.fitted_rate = (cnt * sxy - sx * sy) / denom;
  }
  return rep;
}

TrajectoryRecord gradient_descent(const ObjectiveHandle& f, const Vec& x0,
                                  const std::function<double(int)>& schedule, int iters,
                                  const ConservedQuantity* cq) {
  if (iters < 1) throw validation_error("gradient_descent: iters must be >= 1");
  TrajectoryRecord tr;
  tr.termination = Termination::time_limit;
  Vec x = x0;
  auto emit = [&](int k, const Vec& state) {
    tr.times.push_back(static_cast<double>(k));
    tr.states.push_back(state);
    tr.f_values.push_back(f.eval(state));
    if (cq) tr.c_values.push_back(cq->c(state));
  };
  emit(0, x);
  for (int k = 0; k < iters; ++k) {
    Vec g = f.gradient(x);
    double gn = nrm2(g);
    // schedule(k) is the step length wherever |grad| >= 1, plain step else
    double alpha = schedule(k) / std::max(1.0, gn);
    x = axpy(-alpha, g, x);
    if (!all_finite(x)) {
      tr.termination = Termination::diverged;
      break;
    }
    emit(k + 1, x);
  }
  tr.step_size = schedule(0);
  return tr;
}

}  // namespace flatlab

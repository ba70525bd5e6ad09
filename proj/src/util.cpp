#include "flatlab/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace flatlab {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // polar Box-Muller
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  have_spare_ = true;
  return u * m;
}

Vec Rng::normal_vec(int n) {
  Vec out(n);
  for (double& x : out) x = normal();
  return out;
}

Vec Rng::unit_vector(int n) {
  for (;;) {
    Vec v = normal_vec(n);
    double s = 0.0;
    for (double x : v) s += x * x;
    if (s > 1e-200) {
      double inv = 1.0 / std::sqrt(s);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

Vec Rng::ball_point(const Vec& x, double r) {
  int n = static_cast<int>(x.size());
  Vec u = unit_vector(n);
  double rho = r * std::pow(uniform01(), 1.0 / n);
  Vec out(x);
  for (int i = 0; i < n; ++i) out[i] += rho * u[i];
  return out;
}

double norm_quantile(double p) {
  // Acklam (2003), relative error < 1.15e-9 over (0,1).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

SphereSequence::SphereSequence(int dim, std::uint64_t seed) : dim_(dim) {
  // generalized golden ratio: unique positive root of x^(d+1) = x + 1
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  alpha_.resize(dim);
  double a = 1.0;
  for (int j = 0; j < dim; ++j) {
    a /= phi;
    alpha_[j] = a;
  }
  state_.resize(dim);
  std::uint64_t s = seed * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL;
  for (int j = 0; j < dim; ++j)
    state_[j] = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

Vec SphereSequence::next() {
  Vec z(dim_);
  double s = 0.0;
  for (;;) {
    for (int j = 0; j < dim_; ++j) {
      state_[j] += alpha_[j];
      state_[j] -= std::floor(state_[j]);
      z[j] = norm_quantile(std::clamp(state_[j], 1e-12, 1.0 - 1e-12));
      s += z[j] * z[j];
    }
    if (s > 1e-12) break;
    s = 0.0;
  }
  double inv = 1.0 / std::sqrt(s);
  for (double& x : z) x *= inv;
  return z;
}

double Poly::eval(double t) const {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Poly::deriv_at_zero(int k) const {
  if (k < 0 || k >= static_cast<int>(c.size())) return 0.0;
  return factorial(k) * c[k];
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] -= b.c[i];
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c.empty() || b.c.empty()) return Poly{{0.0}};
  Poly out;
  out.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  return out;
}

Poly pow(Poly base, int k) {
  Poly out = Poly::constant(1.0);
  while (k > 0) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

int worker_count() {
  static int count = [] {
    const char* env = std::getenv("FLATLAB_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) return 1;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw > 0 ? std::min(v, hw) : v;
  }();
  return count;
}

void parallel_for(int n, const std::function<void(int)>& body) {
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace flatlab

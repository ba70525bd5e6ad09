#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatlab {

using Vec = std::vector<double>;

/// Thrown on bad user/config input; the CLI maps it to exit code 2.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a computation cannot produce a usable result; CLI exit code 3.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Deterministic random numbers (self-contained so output streams never depend
// on the standard library implementation).

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x6a09e667f3bcc909ULL) {}

  std::uint64_t next_u64() { return splitmix64(state_); }
  // uniform on [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }
  double normal();
  Vec normal_vec(int n);
  Vec unit_vector(int n);
  // point uniform in the closed ball of radius r around x
  Vec ball_point(const Vec& x, double r);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Inverse of the standard normal CDF (Acklam's rational approximation).
double norm_quantile(double p);

/// Low-discrepancy (Kronecker) sequence mapped to the unit sphere in R^dim.
/// Deterministic given (dim, seed); point i of seed s is a prefix-stable
/// stream, so enlarging the budget only appends directions.
class SphereSequence {
 public:
  SphereSequence(int dim, std::uint64_t seed);
  Vec next();

 private:
  int dim_;
  Vec alpha_;
  Vec state_;
};

// ---------------------------------------------------------------------------
// Dense univariate polynomials. Catalog objectives restrict themselves to a
// line x + t v as a Poly, which makes directional derivatives exact.

struct Poly {
  Vec c;  // c[i] * t^i

  static Poly constant(double v) { return Poly{{v}}; }
  static Poly affine(double a0, double a1) { return Poly{{a0, a1}}; }

  double eval(double t) const;
  /// d^k/dt^k at t = 0, i.e. k! * c[k].
  double deriv_at_zero(int k) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly pow(Poly base, int k);

double factorial(int k);

// ---------------------------------------------------------------------------
// Deterministic parallel map. FLATLAB_THREADS caps the worker count
// (default 1). Bodies must write to disjoint slots; reduction order is then
// independent of scheduling.

int worker_count();
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace flatlab

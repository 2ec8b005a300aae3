#pragma once

// One-dimensional rules, deterministic summation and the node-evaluation
// kernels (serial reference and OpenMP) shared by all integrators.

#include <cstddef>
#include <functional>
#include <vector>

namespace shrinker {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes on [a, b].
Rule1D gauss_legendre(int n, double a, double b);
// Composite midpoint rule with n cells on [a, b].
Rule1D midpoint_rule(int n, double a, double b);
// Periodic trapezoid rule with n nodes on [a, a + period).
Rule1D periodic_trapezoid(int n, double a, double period);

// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

enum class Execution { Serial, Parallel };

// out[i] = fn(i) for i in [0, n).  Each slot is written by exactly one
// iteration, so both policies produce identical vectors.
template <class T, class Fn>
std::vector<T> map_nodes(std::size_t n, Fn&& fn, Execution exec) {
  std::vector<T> out(n);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  } else {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return out;
}

// Radius beyond which the tail of int_S^inf s^(2a-1) exp(-c s^2 / 4) ds is
// below `tolerance` times the full integral (regularized upper incomplete gamma).
double gaussian_tail_radius(double a, double c, double tolerance);

int max_threads();

}  // namespace shrinker

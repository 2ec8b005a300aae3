#include <cmath>
#include <numeric>

#include "doctest.h"
#include "shrinker/quadrature.hpp"

using namespace shrinker;

TEST_SUITE("quadrature") {
  TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const auto r = gauss_legendre(6, -1.0, 3.0);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 11);
    CHECK(s == doctest::Approx((std::pow(3.0, 12) - 1.0) / 12.0).epsilon(1e-13));
    const auto big = gauss_legendre(64, 0.0, 1.0);
    CHECK(std::accumulate(big.weights.begin(), big.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("midpoint and periodic trapezoid rules") {
    const auto m = midpoint_rule(4, 0.0, 1.0);
    CHECK(m.nodes[0] == doctest::Approx(0.125));
    CHECK(m.weights[3] == doctest::Approx(0.25));
    const auto p = periodic_trapezoid(16, 0.0, 2 * M_PI);
    double s = 0;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) s += p.weights[i] * std::cos(3 * p.nodes[i]) * std::cos(3 * p.nodes[i]);
    CHECK(s == doctest::Approx(M_PI).epsilon(1e-14));
  }

  TEST_CASE("pairwise sum is order-fixed and accurate") {
    std::vector<double> x(100001);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / static_cast<double>(i + 1);
    const double a = pairwise_sum(x);
    CHECK(a == pairwise_sum(x));
    double kahan = 0, comp = 0;
    for (double v : x) {
      const double y = v - comp, t = kahan + y;
      comp = (t - kahan) - y;
      kahan = t;
    }
    CHECK(std::abs(a - kahan) < 1e-13);
    CHECK(pairwise_sum(nullptr, 0) == 0.0);
  }

  TEST_CASE("serial and parallel node maps agree") {
    auto fn = [](std::size_t i) { return std::sin(0.001 * static_cast<double>(i)); };
    const auto a = map_nodes<double>(5000, fn, Execution::Serial);
    const auto b = map_nodes<double>(5000, fn, Execution::Parallel);
    CHECK(a == b);
    CHECK(max_threads() >= 1);
  }

  TEST_CASE("gaussian tail radius drops the requested fraction") {
    // a = 1/2 is a one-dimensional half-line Gaussian: tail fraction erfc(S sqrt(c)/2)
    const double s = gaussian_tail_radius(0.5, 1.0, 1e-12);
    CHECK(std::erfc(s / 2) <= 1.0001e-12);
    CHECK(std::erfc(s / 2) > 1e-14);
    CHECK(gaussian_tail_radius(2.0, 0.5, 1e-12) > gaussian_tail_radius(2.0, 2.0, 1e-12));
  }
}

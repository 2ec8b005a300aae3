#include "doctest.h"
#include "shrinker/tensor.hpp"

using namespace shrinker;

namespace {

Mat<double> sample_spd() {
  Mat<double> m;
  const double a[4][4] = {{4, 1, 0.5, 0}, {1, 3, 0.2, 0.1}, {0.5, 0.2, 2, -0.3}, {0, 0.1, -0.3, 1.5}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = a[i][j];
  return m;
}

}  // namespace

TEST_SUITE("tensor") {
  TEST_CASE("inverse and determinant of an SPD matrix") {
    const auto m = sample_spd();
    const auto inv = inverse_spd(m);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += m(i, k) * inv(k, j);
        CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
      }
    Mat<double> L;
    REQUIRE(cholesky(m, L));
    double det = 1;
    for (int i = 0; i < 4; ++i) det *= L(i, i) * L(i, i);
    CHECK(determinant(m) == doctest::Approx(det).epsilon(1e-13));
  }

  TEST_CASE("cholesky rejects indefinite input") {
    Mat<double> m = identity_matrix<double>();
    m(2, 2) = -1.0;
    Mat<double> L;
    CHECK_FALSE(cholesky(m, L));
  }

  TEST_CASE("orthonormal components preserve norms") {
    const auto g = sample_spd();
    const auto ginv = inverse_spd(g);
    Mat<double> t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) t(i, j) = 0.3 * (i + 1) * (j + 2) + (i == j ? 1.0 : 0.0);
    const auto e = to_orthonormal(t, g);
    double flat = 0;
    for (int i = 0; i < Mat<double>::size; ++i) flat += e[i] * e[i];
    CHECK(flat == doctest::Approx(inner(t, t, ginv)).epsilon(1e-13));
    CHECK(trace(e, identity_matrix<double>()) == doctest::Approx(trace(t, ginv)).epsilon(1e-13));

    Tensor<double, 3> c;
    for (int f = 0; f < Tensor<double, 3>::size; ++f) c[f] = 0.01 * f - 0.2;
    const auto ec = to_orthonormal(c, g);
    double s = 0;
    for (int f = 0; f < Tensor<double, 3>::size; ++f) s += ec[f] * ec[f];
    CHECK(s == doctest::Approx(norm_squared(c, ginv)).epsilon(1e-12));
  }

  TEST_CASE("index layout and raising") {
    Tensor<double, 3> t;
    t(1, 2, 3) = 5.0;
    CHECK(t[1 * 16 + 2 * 4 + 3] == 5.0);
    const auto idx = Tensor<double, 3>::unflatten(1 * 16 + 2 * 4 + 3);
    CHECK(idx[0] == 1);
    CHECK(idx[1] == 2);
    CHECK(idx[2] == 3);

    Mat<double> g = identity_matrix<double>();
    g(0, 0) = 4.0;
    const auto ginv = inverse_spd(g);
    Vec<double> v;
    v(0) = 2.0;
    CHECK(raise(v, ginv)(0) == doctest::Approx(0.5));
    CHECK(evaluate_on_covectors(g, v, v, ginv) == doctest::Approx(1.0));
    CHECK(max_abs(t) == 5.0);
  }
}

#include <cmath>
#include <random>

#include "doctest.h"
#include "shrinker/catalog.hpp"
#include "shrinker/curvature.hpp"

using namespace shrinker;

namespace {

Mat<double> frame_of(const Mat<double>& t, const GeometryCache& c) { return to_orthonormal(t, c.g); }

void check_diag(const Mat<double>& m, double a, double b, double c, double d) {
  const double v[4] = {a, b, c, d};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m(i, j) == doctest::Approx(i == j ? v[i] : 0.0).scale(1.0).epsilon(1e-10));
}

}  // namespace

TEST_SUITE("curvature") {
  TEST_CASE("parameter regions") {
    CHECK(classify_parameters({1, 1.0 / 3}) == ParameterRegion::BachLine);
    CHECK(classify_parameters({0, 1}) == ParameterRegion::InsideCone);
    CHECK(classify_parameters({1, 0}) == ParameterRegion::OutsideCone);
    CHECK(classify_parameters({0, 0}) == ParameterRegion::Origin);
    CHECK(classify_parameters({-1, -1}) == ParameterRegion::InsideCone);
    CHECK(classify_parameters({-1, 0}) == ParameterRegion::OutsideCone);
    CHECK(to_string(ParameterRegion::BachLine) == "BachLine");
  }

  TEST_CASE("cylinder oracle values through every route") {
    const auto m = catalog_model("cyl-s3xr");
    const auto e = evaluate_point(m, ChartPoint{{1.0, 1.2, 0.3, -0.8}});
    check_diag(frame_of(tensor_V(e.geo), e.geo), 3.0 / 16, 3.0 / 16, 3.0 / 16, -9.0 / 16);
    check_diag(frame_of(tensor_U(e.geo, URoute::Direct), e.geo), -1.0 / 16, -1.0 / 16, -1.0 / 16, 3.0 / 16);
    check_diag(frame_of(tensor_U(e.geo, URoute::OnSoliton, &e.pot), e.geo), -1.0 / 16, -1.0 / 16, -1.0 / 16,
               3.0 / 16);
    for (auto r : {BachRoute::Weyl, BachRoute::UV, BachRoute::D})
      check_diag(frame_of(bach_tensor(e.geo, r, &e.pot), e.geo), 0, 0, 0, 0);
    CHECK(max_abs(cotton_tensor(e.geo)) < 1e-12);
    CHECK(max_abs(d_tensor(e.geo, e.pot, DRoute::Conformal)) < 1e-12);
    check_diag(frame_of(bach_like({0, 1}, e.geo), e.geo), 3.0 / 16, 3.0 / 16, 3.0 / 16, -9.0 / 16);
    check_diag(frame_of(bach_like({0.5, 1.0 / 6}, e.geo), e.geo), 0, 0, 0, 0);

    const auto s = catalog_model("cyl-s2xr2");
    const auto es = evaluate_point(s, ChartPoint{{1.3, 0.5, 0.7, -1.1}});
    check_diag(frame_of(tensor_U(es.geo, URoute::Direct), es.geo), 0, 0, 0, 0);
    check_diag(frame_of(bach_tensor(es.geo, BachRoute::Weyl), es.geo), 1.0 / 24, 1.0 / 24, -1.0 / 24, -1.0 / 24);
    check_diag(frame_of(bach_tensor(es.geo, BachRoute::D, &es.pot), es.geo), 1.0 / 24, 1.0 / 24, -1.0 / 24,
               -1.0 / 24);
    const double gf2 = inner(es.pot.df, es.pot.df, es.geo.ginv);
    for (auto r : {DRoute::Conformal, DRoute::SolitonFormula})
      CHECK(norm_squared(d_tensor(es.geo, es.pot, r), es.geo.ginv) == doctest::Approx(gf2 / 12).epsilon(1e-10));
  }

  TEST_CASE("cotton symmetries and the Bach line relation on a generic metric") {
    // not conformally flat, so C and B are nonzero
    const auto metric = make_symmetric_field([](const auto& x) {
      using S = std::decay_t<decltype(x[0])>;
      using std::cos; using std::exp; using std::sin;
      Mat<S> g = identity_matrix<S>();
      g(0, 0) = exp(0.3 * sin(x[1]));
      g(1, 1) = exp(0.6 * sin(x[0]));
      g(2, 2) = 1.0 + 0.2 * cos(x[0] + x[3]);
      g(0, 2) = g(2, 0) = 0.1 * sin(x[1]);
      return g;
    });
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (int t = 0; t < 5; ++t) {
      const auto c = geometry_at(*metric, ChartPoint{{u(rng), u(rng), u(rng), u(rng)}});
      const auto cot = cotton_tensor(c);
      double skew = 0, tr = 0, scale = 1e-300;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k) {
            skew = std::max(skew, std::abs(cot(i, j, k) + cot(j, i, k)));
            scale = std::max(scale, std::abs(cot(i, j, k)));
          }
      for (int j = 0; j < 4; ++j) {
        double s1 = 0, s2 = 0;
        for (int i = 0; i < 4; ++i)
          for (int k = 0; k < 4; ++k) {
            s1 += c.ginv(i, k) * cot(i, j, k);
            s2 += c.ginv(i, k) * cot(j, i, k);
          }
        tr = std::max({tr, std::abs(s1), std::abs(s2)});
      }
      CHECK(scale > 1e-4);
      CHECK(skew / scale < 1e-12);
      CHECK(tr / scale < 1e-10);

      for (double beta : {1.0, -0.4, 2.5}) {
        const auto lhs = bach_like({3 * beta, beta}, c);
        const auto rhs = bach_tensor(c, BachRoute::Weyl) * (6 * beta);
        for (int i = 0; i < Mat<double>::size; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).scale(1.0).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("soliton-only routes reject the test metrics") {
    const auto m = catalog_model("conformal-torus");
    const auto e = evaluate_point(m, ChartPoint{{0.5, 1.0, 0, 0}});
    CHECK_FALSE(e.has_potential);
    CHECK_THROWS_AS(tensor_U<double>(e.geo, URoute::OnSoliton, nullptr), NotASolitonError);
    CHECK_THROWS_AS(bach_tensor<double>(e.geo, BachRoute::D, nullptr), NotASolitonError);
    PotentialJet<double> fake;
    fake.df(0) = 1.0;
    CHECK_THROWS_AS(d_tensor(e.geo, fake, DRoute::SolitonFormula), NotASolitonError);
    CHECK_THROWS_AS(tensor_U(e.geo, URoute::OnSoliton, &fake), NotASolitonError);
    CHECK_THROWS_AS(bach_like({0, 0}, e.geo), InputError);
  }

  TEST_CASE("traces on catalog solitons vanish") {
    for (const char* name : {"gaussian", "sphere4", "cyl-s3xr", "cyl-s2xr2", "flat-torus"}) {
      const auto m = catalog_model(name);
      std::mt19937_64 rng(2);
      const auto t = traces(evaluate_point(m, random_point(m, rng)).geo);
      CHECK(std::abs(t.trU) < 1e-12);
      CHECK(std::abs(t.trV) < 1e-12);
      CHECK(std::abs(t.trB) < 1e-12);
    }
  }

  TEST_CASE("traces and divergences on the conformal torus") {
    const auto m = catalog_model("conformal-torus");
    const ChartPoint p{{0.9, 2.2, 0.0, 0.0}};
    const auto c = evaluate_point(m, p).geo;
    const auto t = traces(c);
    CHECK(std::abs(t.laplacian_R) > 1e-3);
    CHECK(t.trU == doctest::Approx(-t.laplacian_R).epsilon(1e-8));
    CHECK(t.trV == doctest::Approx(3 * t.laplacian_R).epsilon(1e-8));
    CHECK(std::abs(t.trB) < 1e-10);
    const auto d = divergences(*m.metric, p);
    CHECK(d.scale_U > 1e-3);
    CHECK(max_abs(d.div_U) < 1e-8);
    CHECK(max_abs(d.div_V) < 1e-8);
  }
}

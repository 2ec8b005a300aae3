#include <cmath>
#include <random>

#include "doctest.h"
#include "shrinker/catalog.hpp"
#include "shrinker/curvature.hpp"

using namespace shrinker;

namespace {

constexpr double kPi = 3.14159265358979323846;

GeometryCache cache_of(const SolitonModel& m, const ChartPoint& p) { return evaluate_point(m, p).geo; }

}  // namespace

TEST_SUITE("chart") {
  TEST_CASE("flat metric jet gives zero curvature") {
    MetricJet jet;
    jet.g = identity_matrix<double>();
    const auto c = geometry_cache(jet);
    CHECK(max_abs(c.riemann) == 0.0);
    CHECK(max_abs(c.dd_weyl) == 0.0);
    CHECK(c.scalar == 0.0);
  }

  TEST_CASE("metric jet round trip through the generic field path") {
    const auto m = catalog_model("cyl-s2xr2");
    const ChartPoint p{{1.1, 0.4, 0.3, -0.7}};
    const auto jet = metric_jet_from(m.metric->taylor<4>(p));
    const auto a = geometry_cache(jet);
    const auto b = cache_of(m, p);
    CHECK(a.scalar == doctest::Approx(b.scalar).epsilon(1e-12));
    for (int f = 0; f < Tensor<double, 4>::size; f += 7) CHECK(a.weyl[f] == doctest::Approx(b.weyl[f]).epsilon(1e-12));
  }

  TEST_CASE("bad metric jets are rejected") {
    MetricJet jet;
    jet.g = identity_matrix<double>();
    jet.g(3, 3) = -2.0;
    CHECK_THROWS_AS(geometry_cache(jet), InputError);
    jet.g = identity_matrix<double>();
    jet.g(0, 1) = 0.5;
    CHECK_THROWS_AS(geometry_cache(jet), InputError);
    jet.g = identity_matrix<double>();
    jet.order = 3;
    try {
      geometry_cache(jet);
      FAIL("expected JetOrderError");
    } catch (const JetOrderError& e) {
      CHECK(e.required() == 4);
      CHECK(e.available() == 3);
      CHECK(std::string(e.what()).find("requires order 4") != std::string::npos);
    }
  }

  TEST_CASE("product curvature values") {
    const auto s3 = catalog_model("cyl-s3xr");
    const ChartPoint p{{1.0, 0.8, 2.0, 0.5}};
    const auto c = cache_of(s3, p);
    CHECK(c.scalar == doctest::Approx(1.5));
    const auto rc = to_orthonormal(c.ricci, c.g);
    CHECK(rc(0, 0) == doctest::Approx(0.5));
    CHECK(rc(2, 2) == doctest::Approx(0.5));
    CHECK(std::abs(rc(3, 3)) < 1e-12);

    const auto s2 = catalog_model("cyl-s2xr2");
    const auto d = cache_of(s2, ChartPoint{{0.9, 1.0, 0.2, 0.1}});
    CHECK(d.scalar == doctest::Approx(1.0));
    CHECK(inner(d.ricci, d.ricci, d.ginv) == doctest::Approx(0.5));
    CHECK(norm_squared(d.weyl, d.ginv) > 0.1);
  }

  TEST_CASE("round S4 has sectional curvature 1/6") {
    const auto m = catalog_model("sphere4");
    const auto c = cache_of(m, ChartPoint{{0.3, -0.5, 1.0, 0.2}});
    CHECK(c.scalar == doctest::Approx(2.0));
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const double area = c.g(a, a) * c.g(b, b) - c.g(a, b) * c.g(a, b);
        CHECK(c.riemann(a, b, a, b) / area == doctest::Approx(1.0 / 6.0));
      }
  }

  TEST_CASE("weyl is trace-free and riemann has its symmetries") {
    const auto m = catalog_model("conformal-torus");
    const auto c = cache_of(m, ChartPoint{{0.4, 2.1, 0.3, 5.0}});
    double worst = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) {
        double s = 0;
        for (int i = 0; i < 4; ++i)
          for (int k = 0; k < 4; ++k) s += c.ginv(i, k) * c.weyl(i, j, k, l);
        worst = std::max(worst, std::abs(s));
      }
    CHECK(worst < 1e-12);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            CHECK(c.riemann(i, j, k, l) == doctest::Approx(-c.riemann(j, i, k, l)).epsilon(1e-12));
            CHECK(c.riemann(i, j, k, l) == doctest::Approx(c.riemann(k, l, i, j)).epsilon(1e-12));
            const double bianchi = c.riemann(i, j, k, l) + c.riemann(i, k, l, j) + c.riemann(i, l, j, k);
            CHECK(std::abs(bianchi) < 1e-12);
          }
  }

  TEST_CASE("metric compatibility on every catalog model") {
    for (const auto& name : catalog_names()) {
      const auto m = catalog_model(name);
      std::mt19937_64 rng(5);
      for (int t = 0; t < 3; ++t) {
        const auto p = random_point(m, rng);
        const auto c = cache_of(m, p);
        const auto d = covariant_derivatives<2>(m.metric->taylor<2>(p), 2, c, 2);
        CHECK(max_abs(d.first) < 1e-12);
        CHECK(max_abs(d.second) < 1e-10);
      }
    }
  }

  TEST_CASE("covariant derivative order errors") {
    const auto m = catalog_model("gaussian");
    const ChartPoint p{{2, 0, 0, 0}};
    const auto c = cache_of(m, p);
    const auto g = m.metric->taylor<2>(p);
    CHECK_THROWS_AS(covariant_derivatives<2>(g, 1, c, 2), JetOrderError);
    CHECK_THROWS_AS(covariant_derivatives<2>(g, 2, c, 3), InputError);
  }

  TEST_CASE("gradient of f and parallel Ricci on the cylinders") {
    const auto g = catalog_model("gaussian");
    const auto e = evaluate_point(g, ChartPoint{{2, 0, 0, 0}});
    CHECK(e.pot.f == doctest::Approx(1.0));
    CHECK(e.pot.df(0) == doctest::Approx(1.0));
    CHECK(e.pot.df(1) == 0.0);
    CHECK(e.pot.lap == doctest::Approx(2.0));
    for (const char* name : {"cyl-s3xr", "cyl-s2xr2"}) {
      const auto m = catalog_model(name);
      const auto c = cache_of(m, ChartPoint{{1.2, 0.7, 0.4, 0.9}});
      CHECK(max_abs(c.d_ricci) < 1e-12);
    }
  }

  TEST_CASE("laplacians") {
    const auto g = catalog_model("gaussian");
    const ChartPoint p{{0.5, 1.0, -0.3, 0.2}};
    const auto e = evaluate_point(g, p);
    auto lp = laplacians(e.geo, g.potential->taylor<2>(p), 2, e.pot);
    CHECK(lp.laplacian == doctest::Approx(2.0));
    CHECK(lp.drift_laplacian == doctest::Approx(2.0 - e.pot.f));
    lp = laplacians(e.geo, Jet<2>(3.0), 2, e.pot);
    CHECK(lp.laplacian == 0.0);
    CHECK(lp.drift_laplacian == 0.0);
    CHECK_THROWS_AS(laplacians(e.geo, Jet<2>(3.0), 1, e.pot), JetOrderError);

    const auto s = catalog_model("cyl-s3xr");
    const ChartPoint q{{1.0, 1.3, 0.2, 1.7}};
    const auto es = evaluate_point(s, q);
    CHECK(laplacians(es.geo, s.potential->taylor<2>(q), 2, es.pot).laplacian == doctest::Approx(0.5));
  }

  TEST_CASE("lichnerowicz examples") {
    const auto t = catalog_model("flat-torus");
    const ChartPoint p{{0.7, 1.9, 2.4, 0.3}};
    const auto c = cache_of(t, p);
    const auto x = seed_coordinates<Jet<2>>(p.coords);
    Mat<Jet<2>> h;
    const Jet<2> wave = cos(1.0 * x[0] + 2.0 * x[1]);
    h(2, 3) = wave;
    h(3, 2) = wave;
    h(2, 2) = 0.5 * wave;
    const auto lh = lichnerowicz_apply(h, 2, c);
    for (int i = 0; i < Mat<double>::size; ++i) CHECK(lh[i] == doctest::Approx(5.0 * h[i].value()).scale(1.0));

    Mat<Jet<2>> constant;
    constant(0, 1) = constant(1, 0) = Jet<2>(1.5);
    CHECK(max_abs(lichnerowicz_apply(constant, 2, c)) == 0.0);

    for (const char* name : {"sphere4", "gaussian"}) {
      const auto m = catalog_model(name);
      const ChartPoint q{{0.3, 0.2, -0.4, 0.1}};
      const auto cm = cache_of(m, q);
      CHECK(max_abs(lichnerowicz_apply(m.metric->taylor<2>(q), 2, cm)) < 1e-12);
    }
    CHECK_THROWS_AS(lichnerowicz_apply(h, 1, c), JetOrderError);
  }

  TEST_CASE("perturbed field is linear in t") {
    const auto t = catalog_model("flat-torus");
    const auto h = make_symmetric_field([](const auto& x) {
      using S = std::decay_t<decltype(x[0])>;
      using std::sin;
      Mat<S> m;
      m(0, 0) = sin(x[1]);
      return m;
    });
    const auto g = perturbed(t.metric, h, 0.25);
    const Mat<double> v = (*g)(std::array<double, 4>{0, kPi / 2, 0, 0});
    CHECK(v(0, 0) == doctest::Approx(1.25));
    CHECK(v(1, 1) == doctest::Approx(1.0));
  }
}

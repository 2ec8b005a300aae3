#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "shrinker/variational.hpp"

using namespace shrinker;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kTorus4 = std::pow(2 * kPi, 4);

QuadratureSpec torus_quad(int n = 32) {
  QuadratureSpec q;
  q.resolution = n;
  q.rule = QuadratureRule::PeriodicTrapezoid;
  return q;
}

Mat<double> diag(double a, double b, double c, double d) {
  Mat<double> m;
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

}  // namespace

TEST_SUITE("variational") {
  TEST_CASE("TT test is exact and algebraic") {
    CHECK(documented_tt_mode().is_tt());
    // trace-free but k . A != 0
    CHECK_FALSE(PerturbationField({{{1, 0, 0, 0}, diag(1, -1, 0, 0), FourierMode::Phase::Cos}}).is_tt());
    // divergence-free but not trace-free
    CHECK_FALSE(PerturbationField({{{1, 0, 0, 0}, diag(0, 1, 1, 0), FourierMode::Phase::Cos}}).is_tt());
    Mat<double> bad;
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(PerturbationField({{{0, 0, 1, 0}, bad, FourierMode::Phase::Sin}}), InputError);
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const auto h = random_perturbation(s);
      bool tt = true;
      for (const auto& m : h.modes()) {
        double tr = 0;
        for (int i = 0; i < 4; ++i) {
          tr += m.amplitude(i, i);
          double ak = 0;
          for (int j = 0; j < 4; ++j) ak += m.amplitude(i, j) * m.k[j];
          tt = tt && ak == 0.0;
        }
        tt = tt && tr == 0.0;
      }
      CHECK(h.is_tt() == tt);
      for (int a : h.active_axes()) CHECK(a < 2);
    }
    const auto h = documented_tt_mode();
    CHECK(h.active_axes() == std::vector<int>{0});
    CHECK(h.flat_l2_mass() == doctest::Approx(kTorus4));
    CHECK(h.flat_biharmonic_mass() == doctest::Approx(kTorus4));
  }

  TEST_CASE("spectral polynomial examples") {
    const auto p = spectral_polynomial(1, 1.0 / 3, 6);
    CHECK(p.a2 == 1.0);
    CHECK(p.a1 == -3.0);
    CHECK(p.a0 == 2.0);
    const auto roots = p.roots();
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(1.0));
    CHECK(roots[1] == doctest::Approx(2.0));
    const auto q = spectral_polynomial(1, 0, 0);
    CHECK(q.a1 == 0.0);
    CHECK(q.a0 == 0.0);
    for (double R : {-3.0, 0.0, 2.0, 7.5}) {
      const auto b = spectral_polynomial(0.5, 1.0 / 6, R);
      for (double mu : {-1.0, 0.3, 4.0})
        CHECK(b(mu) == doctest::Approx(0.5 * (mu - R / 3) * (mu - R / 6)).epsilon(1e-13));
    }
  }

  TEST_CASE("bach line factorization on random triples") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-10, 10);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
      const double a = u(rng), R = u(rng), mu = u(rng);
      const auto p = spectral_polynomial(a, a / 3, R);
      const double v = p(mu);
      worst = std::max(worst, std::abs(v - a * (mu - R / 3) * (mu - R / 6)) / (1 + std::abs(v)));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("stability verdict examples are exact") {
    auto v = stability_verdict(spectral_polynomial(1, 0, 0), 1);
    CHECK(v.infimum == 1.0);
    CHECK(v.positive);
    v = stability_verdict(spectral_polynomial(1, 1.0 / 3, 6), 3);
    CHECK(v.infimum == 2.0);
    CHECK(v.argmin == 3.0);
    CHECK(v.positive);
    v = stability_verdict(spectral_polynomial(1, 1.0 / 3, 6), 1.5);
    CHECK(v.infimum == -0.25);
    CHECK(v.argmin == 1.5);
    CHECK_FALSE(v.positive);
    v = stability_verdict(spectral_polynomial(-1, 0, 2), 0);
    CHECK(v.infimum == -std::numeric_limits<double>::infinity());
    CHECK_FALSE(v.positive);
  }

  TEST_CASE("stability scan scaling covariance") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2, 2);
    std::vector<ParameterPair> grid;
    for (int i = 0; i < 200; ++i) grid.push_back({u(rng), u(rng)});
    for (double R : {0.0, 3.0}) {
      for (double mu0 : {0.0, 1.0, 4.0}) {
        const auto base = stability_scan(mu0, R, grid);
        for (double lambda : {0.5, 3.0, -0.5, -2.0}) {
          std::vector<ParameterPair> scaled;
          for (auto p : grid) scaled.push_back({lambda * p.alpha, lambda * p.beta});
          const auto s = stability_scan(mu0, R, scaled);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            if (lambda > 0) CHECK(s[i].verdict.positive == base[i].verdict.positive);
            // positive -> nonpositive after a sign flip; the converse fails when inf = 0 or -inf
            if (lambda < 0 && base[i].verdict.positive) CHECK_FALSE(s[i].verdict.positive);
          }
        }
      }
    }
    const auto a = stability_scan(1, 3, grid, Execution::Serial);
    const auto b = stability_scan(1, 3, grid, Execution::Parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i].verdict.infimum == b[i].verdict.infimum);
  }

  TEST_CASE("spectral consistency records the V' discrepancy") {
    for (auto [a, b, R] : std::vector<std::array<double, 3>>{{1, 0, 6}, {0.3, 1.2, -2}, {1, 1.0 / 3, 4}}) {
      const auto s = spectral_consistency(a, b, R);
      CHECK(s.printed_a0 == doctest::Approx(spectral_polynomial(a, b, R).a0));
      CHECK(s.a0_full_vprime == doctest::Approx(s.printed_a0));
      CHECK(s.discrepancy == doctest::Approx(R * R * (a / 12 - b / 4)));
      CHECK(s.a1_composed == doctest::Approx(spectral_polynomial(a, b, R).a1));
    }
  }

  TEST_CASE("functional values") {
    QuadratureSpec q;
    q.resolution = 16;
    const auto v = functional_eval({1, 0}, catalog_model("sphere4"), q);
    CHECK(v.R2 == doctest::Approx(4 * 96 * kPi * kPi).epsilon(1e-12));
    CHECK(std::abs(v.W2) < 1e-9);
    CHECK(v.F == doctest::Approx(functional_combine({1, 0}, v.W2, v.R2)));
    CHECK(functional_combine({1, 0.5}, 2.0, 3.0) == doctest::Approx(-2.0 + (1.0 / 3 - 0.5) / 2 * 3.0));
    CHECK_THROWS_AS(functional_eval({1, 0}, catalog_model("gaussian"), q), DomainError);
    const auto f = functional_eval({1, 0}, catalog_model("flat-torus"), torus_quad(8));
    CHECK(f.F == 0.0);
  }

  TEST_CASE("conformal torus functional converges") {
    const auto ct = catalog_model("conformal-torus");
    const auto a = functional_eval({1, 0}, ct, torus_quad(32));
    const auto b = functional_eval({1, 0}, ct, torus_quad(48));
    CHECK(a.R2 == doctest::Approx(b.R2).epsilon(1e-8));
    CHECK(std::abs(a.W2) < 1e-10);
  }

  TEST_CASE("first variation on the conformal torus") {
    const auto ct = catalog_model("conformal-torus");
    for (ParameterPair p : {ParameterPair{1, 0}, ParameterPair{0, 1}}) {
      const auto r = first_variation_check(p, ct, conformal_bump_direction(ct), torus_quad());
      INFO("alpha " << p.alpha << " mismatch " << r.mismatch);
      CHECK(r.pass);
      CHECK(std::abs(r.predicted) > 1e-3);
      CHECK(r.steps.size() == 2);
    }
    const auto r = first_variation_check({0.5, 1}, ct, as_direction(random_perturbation(5)), torus_quad());
    CHECK(r.pass);
    CHECK_THROWS_AS(first_variation_check({1, 0}, catalog_model("sphere4"), conformal_bump_direction(ct),
                                          torus_quad()),
                    InputError);
  }

  TEST_CASE("steps that break positivity are rejected") {
    const auto ft = catalog_model("flat-torus");
    const auto h = as_direction(documented_tt_mode(2.0));
    const auto r = first_variation_check({1, 0}, ft, h, torus_quad(16), {0.8, 1e-3});
    CHECK(r.rejected_steps == std::vector<double>{0.8});
    CHECK(r.steps == std::vector<double>{1e-3});
  }

  TEST_CASE("second variation of int R^2") {
    const auto h = documented_tt_mode();
    const auto flat = second_variation_R2(catalog_model("flat-torus"), h, torus_quad());
    CHECK(flat.form == 0.0);
    REQUIRE(flat.fd.has_value());
    CHECK(std::abs(*flat.fd) < 1e-6);
    const auto ct = catalog_model("conformal-torus");
    const auto a = second_variation_R2(ct, h, torus_quad(32));
    const auto b = second_variation_R2(ct, h, torus_quad(48));
    CHECK_FALSE(a.fd.has_value());
    CHECK(a.form == doctest::Approx(b.form).epsilon(1e-4));
    CHECK_THROWS_AS(second_variation_R2(ct, PerturbationField({{{1, 0, 0, 0}, diag(1, 0, 0, 0),
                                                                  FourierMode::Phase::Cos}}),
                                        torus_quad()),
                    InputError);
  }

  TEST_CASE("flat second variation: sign, linearity, additivity") {
    // the central difference of F = -alpha int |W|^2 + ... comes out as -alpha (2 pi)^4;
    // the predicted +alpha (2 pi)^4 has the opposite sign
    const auto r = flat_second_variation_check(1, documented_tt_mode(), torus_quad(16));
    CHECK(r.predicted == doctest::Approx(kTorus4));
    CHECK(r.extrapolated == doctest::Approx(-kTorus4).epsilon(1e-6));
    CHECK_FALSE(r.pass);
    const auto neg = flat_second_variation_check(-1, documented_tt_mode(), torus_quad(16));
    CHECK(neg.predicted == -r.predicted);
    CHECK(neg.extrapolated == doctest::Approx(-r.extrapolated).epsilon(1e-9));

    Mat<double> a2 = diag(1, 0, 0, -1);
    const PerturbationField two({{{1, 0, 0, 0}, diag(0, 1, -1, 0), FourierMode::Phase::Cos},
                                 {{0, 2, 0, 0}, a2, FourierMode::Phase::Cos}});
    REQUIRE(two.is_tt());
    CHECK(two.flat_biharmonic_mass() == doctest::Approx(kTorus4 * (1 + 16)));
    const PerturbationField second({{{0, 2, 0, 0}, a2, FourierMode::Phase::Cos}});
    const auto t = flat_second_variation_check(1, two, torus_quad(16));
    const auto s = flat_second_variation_check(1, second, torus_quad(16));
    CHECK(t.extrapolated == doctest::Approx(r.extrapolated + s.extrapolated).epsilon(1e-6));
    CHECK_THROWS_AS(flat_second_variation_check(1, PerturbationField({{{1, 0, 0, 0}, diag(1, 0, 0, 0),
                                                                         FourierMode::Phase::Cos}}),
                                                torus_quad(16)),
                    InputError);
  }

  TEST_CASE("weyl gradient ratio") {
    const auto w = weyl_gradient_diagnostic(torus_quad(32));
    CHECK(std::abs(w.bach_pairing) > 1e-3);
    CHECK(w.ratio == doctest::Approx(-4.0).epsilon(1e-5));
  }
}

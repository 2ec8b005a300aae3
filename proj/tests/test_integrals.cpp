#include <cmath>

#include "doctest.h"
#include "shrinker/integrals.hpp"

using namespace shrinker;

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::vector<std::string> kSolitons = {"gaussian", "sphere4", "cyl-s3xr", "cyl-s2xr2"};

QuadratureSpec quad_at(int n, Execution exec = Execution::Parallel) {
  QuadratureSpec q;
  q.resolution = n;
  q.exec = exec;
  return q;
}

double one(const PointSample&) { return 1.0; }

}  // namespace

TEST_SUITE("integrals") {
  TEST_CASE("ball volume and sphere area on the gaussian") {
    const auto g = catalog_model("gaussian");
    const auto v = integrate(g, one, DomainSpec::sublevel(1.0), 0.0, quad_at(32));
    CHECK(v.value == doctest::Approx(8 * kPi * kPi).epsilon(1e-12));
    const auto a = boundary_integrate(g, one, 1.0, 0.0, quad_at(32));
    CHECK(a.value == doctest::Approx(16 * kPi * kPi).epsilon(1e-12));
  }

  TEST_CASE("weighted gradient moment on the S3 cylinder") {
    const auto s = catalog_model("cyl-s3xr");
    const auto r = integrate(s, [](const PointSample& p) { return p.grad_f2; }, DomainSpec::full_manifold(), 1.0,
                             quad_at(64));
    CHECK(r.value == doctest::Approx(16 * kPi * kPi * std::sqrt(kPi) * std::exp(-1.5)).epsilon(1e-10));
    const auto b = boundary_integrate(
        s, [](const PointSample& p) { return p.dR_df / std::sqrt(p.grad_f2); }, 2.0, 1.0, quad_at(16));
    CHECK(b.value == 0.0);
  }

  TEST_CASE("empty sublevel sets") {
    const auto s = catalog_model("cyl-s3xr");
    const auto r = integrate(s, one, DomainSpec::sublevel(1.0), 1.0, quad_at(16));
    CHECK(r.empty_domain);
    CHECK(r.value == 0.0);
    CHECK(r.nodes == 0);
  }

  TEST_CASE("domain and input errors") {
    const auto g = catalog_model("gaussian");
    CHECK_THROWS_AS(integrate(g, one, DomainSpec::sublevel(1.0), -1.0, quad_at(16)), InputError);
    CHECK_THROWS_AS(integrate(g, one, DomainSpec::full_manifold(), 0.0, quad_at(16)), DomainError);
    CHECK_THROWS_AS(boundary_integrate(g, one, 0.0, 1.0, quad_at(16)), DomainError);
    CHECK_THROWS_AS(integrate(g, one, DomainSpec::sublevel(1.0), 1.0, quad_at(4)), InputError);
    CHECK_THROWS_AS(boundary_integrate(catalog_model("sphere4"), one, 2.0, 1.0, quad_at(16)), DomainError);
    CHECK_THROWS_AS(verify_identity("L9.9", g, {1.0, false, 1.0}, quad_at(16)), InputError);
    CHECK_THROWS_AS(verify_identity("L2.2-1", catalog_model("flat-torus"), {1.0, false, 1.0}, quad_at(16)),
                    NotASolitonError);
  }

  TEST_CASE("serial and parallel integration are bit-identical") {
    const auto s = catalog_model("cyl-s2xr2");
    auto integrand = [](const PointSample& p) { return p.D2 + p.grad_f2 * p.R; };
    const auto a = integrate(s, integrand, DomainSpec::sublevel(3.0), 0.5, quad_at(32, Execution::Serial));
    const auto b = integrate(s, integrand, DomainSpec::sublevel(3.0), 0.5, quad_at(32, Execution::Parallel));
    CHECK(a.value == b.value);
  }

  TEST_CASE("pinned values") {
    const auto s2 = catalog_model("cyl-s2xr2");
    const auto l51 = verify_identity("L5.1", s2, {0.0, true, 1.0}, quad_at(64));
    const double expected = -(4 * kPi * kPi / 3) * std::exp(-1.0);
    CHECK(l51.verdict == Verdict::Pass);
    CHECK(l51.lhs == doctest::Approx(expected).epsilon(1e-9));
    CHECK(l51.rhs == doctest::Approx(expected).epsilon(1e-9));

    const auto s3 = catalog_model("cyl-s3xr");
    const auto l73 = verify_identity("L7.3", s3, {0.0, true, 1.0}, quad_at(64));
    const double e73 = 3.0 / 16 * 16 * kPi * kPi * std::sqrt(kPi) * std::exp(-1.5);
    CHECK(l73.verdict == Verdict::Pass);
    CHECK(l73.lhs == doctest::Approx(e73).epsilon(1e-9));
    CHECK(l73.rhs == doctest::Approx(e73).epsilon(1e-9));
  }

  TEST_CASE("every identity holds on every soliton at a coarse grid") {
    for (const auto& name : kSolitons) {
      const auto m = catalog_model(name);
      for (const auto& id : identity_ids()) {
        for (double c : {0.5, 2.0}) {
          const auto rep = verify_identity(id, m, {m.min_f + 1.0, false, c}, quad_at(32));
          INFO(name << " " << id << " c=" << c << " residual " << rep.residual);
          CHECK(rep.verdict != Verdict::Fail);
          CHECK(rep.uses_c == identity_uses_c(id));
          if (rep.verdict == Verdict::VacuousPass) CHECK_FALSE(rep.note.empty());
        }
      }
    }
  }

  TEST_CASE("vacuous pass is distinct from pass") {
    const auto g = catalog_model("gaussian");
    const auto rep = verify_identity("L2.2-2", g, {1.0, false, 1.0}, quad_at(16));
    CHECK(rep.verdict == Verdict::VacuousPass);
    CHECK(to_string(rep.verdict) == "vacuous-pass");
    const auto empty = verify_identity("L7.3", catalog_model("cyl-s3xr"), {1.0, false, 1.0}, quad_at(16));
    CHECK(empty.empty_domain);
    CHECK(empty.verdict == Verdict::VacuousPass);
    CHECK(empty.note.find("empty") != std::string::npos);
    CHECK(to_string(Verdict::Pass) == "pass");
  }

  TEST_CASE("doubling the resolution changes identity integrals below 1e-8") {
    for (const char* name : {"cyl-s3xr", "cyl-s2xr2", "gaussian"}) {
      const auto m = catalog_model(name);
      for (const char* id : {"L5.1", "L7.3", "EQ-VW"}) {
        const auto a = verify_identity(id, m, {m.min_f + 2.0, false, 1.0}, quad_at(32));
        const auto b = verify_identity(id, m, {m.min_f + 2.0, false, 1.0}, quad_at(64));
        INFO(name << " " << id);
        CHECK(std::abs(a.lhs - b.lhs) <= 1e-8 * std::max(1.0, std::abs(b.lhs)));
      }
    }
  }

  TEST_CASE("decay probe") {
    const auto d = decay_probe(catalog_model("cyl-s3xr"), 1.0, {2, 3, 4}, quad_at(16));
    for (double v : d.values) CHECK(std::abs(v) < 1e-20);
    CHECK(d.nonincreasing);
    CHECK(d.below_tolerance);
    CHECK(decay_probe(catalog_model("gaussian"), 0.3, {1, 2}, quad_at(16)).below_tolerance);
    CHECK_THROWS_AS(decay_probe(catalog_model("gaussian"), 0.0, {1, 2}, quad_at(16)), InputError);
    CHECK_THROWS_AS(decay_probe(catalog_model("gaussian"), 1.0, {2, 1}, quad_at(16)), InputError);
  }

  TEST_CASE("conformal torus gradient bound converges") {
    const auto t = catalog_model("conformal-torus");
    const auto c = torus_convergence(t, [](const PointSample& p) { return p.grad_R2; }, 32, 48);
    CHECK(c.fine_value > 0.0);
    CHECK(c.relative_change < 1e-3);
  }

  TEST_CASE("rigidity kernels") {
    const auto g = rigidity_integrand_report(catalog_model("gaussian"), 0.5, {1, 0}, quad_at(32));
    CHECK_FALSE(g.empty_domain);
    CHECK(g.kernel_R == 0.0);
    CHECK(g.kernel_gradR == 0.0);
    CHECK(g.kernel_D == 0.0);
    CHECK(g.flat);
    CHECK(g.verdict == Verdict::Pass);

    const auto s3 = rigidity_integrand_report(catalog_model("cyl-s3xr"), 0.5, {1, 0}, quad_at(32));
    CHECK(s3.empty_domain);
    CHECK(s3.verdict == Verdict::VacuousPass);
    CHECK(s3.note.find("Tension") == std::string::npos);

    const auto s2 = rigidity_integrand_report(catalog_model("cyl-s2xr2"), 0.75, {1, 0}, quad_at(32));
    CHECK(s2.empty_domain);
    CHECK(s2.verdict == Verdict::VacuousPass);
    CHECK(s2.max_U < 1e-8);
    CHECK(s2.note.find("Tension") != std::string::npos);

    CHECK_THROWS_AS(rigidity_integrand_report(catalog_model("gaussian"), 1.0, {1, 0}, quad_at(32)), InputError);
    CHECK_THROWS_AS(rigidity_integrand_report(catalog_model("gaussian"), 0.0, {1, 0}, quad_at(32)), InputError);
  }

  TEST_CASE("stokes self-test at a small grid") {
    const auto a = stokes_selftest(16, 3, 99, Execution::Serial);
    const auto b = stokes_selftest(16, 3, 99, Execution::Parallel);
    REQUIRE(a.cases.size() == b.cases.size());
    for (std::size_t i = 0; i < a.cases.size(); ++i) CHECK(a.cases[i].residual == b.cases[i].residual);
    bool saw_position = false;
    for (const auto& c : a.cases)
      if (c.domain == "ball" && c.field == "position") {
        saw_position = true;
        CHECK(c.volume_integral == doctest::Approx(32 * kPi * kPi).epsilon(1e-12));
        CHECK(c.boundary_integral == doctest::Approx(32 * kPi * kPi).epsilon(1e-12));
      }
    CHECK(saw_position);
  }
}

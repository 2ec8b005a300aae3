#include <sstream>

#include "doctest.h"
#include "shrinker/report.hpp"

using namespace shrinker;

namespace {

SuiteConfig cheap_config() {
  SuiteConfig c;
  c.models = {"gaussian", "cyl-s2xr2"};
  c.identities = {"L5.1", "L7.3", "L2.2-1"};
  c.resolution = 16;
  return c;
}

std::string without_wall_time(Json doc) {
  doc.erase("wall_time");
  return render_json(doc);
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("rational parsing") {
    CHECK(parse_rational("1/3") == 1.0 / 3.0);
    CHECK(parse_rational("-2") == -2.0);
    CHECK(parse_rational("0.25") == 0.25);
    CHECK(parse_rational("-3/4") == -0.75);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_rational(""), InputError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), InputError);
  }

  TEST_CASE("validation names the bad entry") {
    SuiteConfig c;
    CHECK_NOTHROW(validate(c));
    c.models = {"nope"};
    CHECK_THROWS_WITH_AS(validate(c), "unknown model 'nope'", InputError);
    c = {};
    c.identities = {"L1.0"};
    CHECK_THROWS_AS(validate(c), InputError);
    c = {};
    c.rigidity_r = {1.5};
    CHECK_THROWS_AS(validate(c), InputError);
    c = {};
    c.params = {{0, 0}};
    CHECK_THROWS_AS(validate(c), InputError);
    c = {};
    c.resolution = 4;
    CHECK_THROWS_AS(validate(c), InputError);
    c = {};
    c.format = "xml";
    CHECK_THROWS_AS(validate(c), InputError);
    c = {};
    c.checks = {"everything"};
    CHECK_THROWS_AS(validate(c), InputError);
  }

  TEST_CASE("config json round trip and overrides") {
    SuiteConfig c = cheap_config();
    c.params = {{1, 1.0 / 3}, {0, 1}};
    c.c_values = {0.5, 2};
    const SuiteConfig back = config_from_json(to_json(c));
    CHECK(render_json(to_json(back)) == render_json(to_json(c)));

    const Json j = Json::parse(R"({"alpha": "1/2", "beta": "1/6", "res": 24, "model": "sphere4"})");
    const SuiteConfig o = config_from_json(j, c);
    REQUIRE(o.params.size() == 1);
    CHECK(o.params[0].alpha == 0.5);
    CHECK(o.params[0].beta == 1.0 / 6.0);
    CHECK(o.resolution == 24);
    CHECK(o.models == std::vector<std::string>{"sphere4"});
    CHECK(o.c_values == c.c_values);

    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"colour": 1})")), InputError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"alpha": 1})")), InputError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"([1, 2])")), InputError);
  }

  TEST_CASE("suite output is deterministic") {
    const auto a = run_suite(cheap_config());
    const auto b = run_suite(cheap_config());
    CHECK(without_wall_time(a.document) == without_wall_time(b.document));
    CHECK(a.ok());
    CHECK(a.summary.pass + a.summary.vacuous == 6);
    CHECK(a.document["version"] == kToolVersion);
    CHECK(a.document["results"].size() == 6);
  }

  TEST_CASE("csv rendering") {
    const auto a = run_suite(cheap_config());
    const std::string csv = render_csv(a.document);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    std::string expected;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) expected += (i ? "," : "") + kCsvColumns[i];
    CHECK(header == expected);
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 6);

    const auto scan = stability_scan(1.0, 6.0, {{1, 1.0 / 3}});
    const std::string s = render_stability_csv(scan, 1.0);
    CHECK(s.rfind("alpha,beta,mu0,R,inf,argmin,verdict", 0) == 0);
  }

  TEST_CASE("errors inside a check become error results") {
    SuiteConfig c;
    c.checks = {"identities"};
    c.models = {"gaussian"};
    c.identities = {"L2.2-1"};
    c.full_manifold = true;  // unweighted identity has no full-manifold limit
    c.resolution = 16;
    const auto r = run_suite(c);
    CHECK_FALSE(r.ok());
    CHECK(r.document["results"][0]["verdict"] == "error");
  }

  TEST_CASE("report envelope recomputes the summary") {
    Json results = Json::array();
    results.push_back({{"kind", "x"}, {"verdict", "pass"}});
    results.push_back({{"kind", "x"}, {"verdict", "vacuous-pass"}});
    results.push_back({{"kind", "x"}, {"verdict", "info"}});
    results.push_back({{"kind", "x"}, {"verdict", "fail"}});
    const auto r = make_report(Json::object(), results, 0.5);
    CHECK(r.summary.pass == 1);
    CHECK(r.summary.vacuous == 1);
    CHECK(r.summary.info == 1);
    CHECK(r.summary.fail == 1);
    CHECK_FALSE(r.ok());
    CHECK(catalog_json().size() == 6);
  }
}

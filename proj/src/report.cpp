#include "shrinker/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace shrinker {

namespace {

const std::vector<std::string> kSolitons = {"gaussian", "sphere4", "cyl-s3xr", "cyl-s2xr2"};
constexpr double kStokesTolerance = 1e-8;
constexpr double kFlatR2Tolerance = 1e-6;

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string verdict_name(bool pass) { return pass ? "pass" : "fail"; }

template <class F>
void capture(Json& results, const Json& identity, F&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    Json err = identity;
    err["verdict"] = "error";
    err["error"] = e.what();
    results.push_back(err);
  }
}

std::vector<std::string> models_or(const SuiteConfig& c, const std::vector<std::string>& fallback) {
  return c.models.empty() ? fallback : c.models;
}

SolitonModel model_for(const SuiteConfig& c, const std::string& name) {
  ModelParams mp;
  mp.amplitude = c.amplitude;
  return catalog_model(name, mp);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt17(v.get<double>());
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return csv_escape(v.dump());
}

double json_number(const Json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw InputError("config key '" + key + "' must be a number or a rational string");
}

std::vector<double> json_numbers(const Json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(json_number(x, key));
  } else {
    out.push_back(json_number(v, key));
  }
  return out;
}

std::vector<std::string> json_strings(const Json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw InputError("config key '" + key + "' must be a string or a list of strings");
  for (const auto& x : v) {
    if (!x.is_string()) throw InputError("config key '" + key + "' must contain strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

void run_identities(const SuiteConfig& c, Json& results) {
  QuadratureSpec quad;
  quad.resolution = c.resolution;
  const auto ids = c.identities.empty() ? identity_ids() : c.identities;
  for (const auto& name : models_or(c, kSolitons)) {
    const SolitonModel model = model_for(c, name);
    std::vector<double> rs = c.r_values;
    if (rs.empty())
      for (double off : c.r_offsets) rs.push_back(model.min_f + off);
    if (c.full_manifold) rs = {0.0};
    for (const auto& id : ids) {
      const std::vector<double> cs = identity_uses_c(id) ? c.c_values : std::vector<double>{1.0};
      for (double r : rs)
        for (double cv : cs) {
          Json tag = {{"kind", "identity"}, {"id", id}, {"model", name}};
          if (!c.full_manifold) tag["r"] = r;
          tag["c"] = cv;
          capture(results, tag, [&] {
            results.push_back(to_json(verify_identity(id, model, {r, c.full_manifold, cv}, quad, c.tolerance)));
          });
        }
    }
  }
}

void run_pointwise(const SuiteConfig& c, Json& results) {
  for (const auto& name : models_or(c, catalog_names())) {
    capture(results, {{"kind", "pointwise"}, {"id", "suite"}, {"model", name}}, [&] {
      for (const auto& chk : pointwise_suite(model_for(c, name), c.points, c.seed)) results.push_back(to_json(chk));
    });
  }
}

void run_rigidity(const SuiteConfig& c, Json& results) {
  QuadratureSpec quad;
  quad.resolution = c.resolution;
  for (const auto& name : models_or(c, kSolitons))
    for (double r : c.rigidity_r)
      for (const auto& p : c.params) {
        const Json tag = {{"kind", "rigidity"}, {"id", "rigidity-kernels"}, {"model", name}, {"r", r},
                          {"alpha", p.alpha}, {"beta", p.beta}};
        capture(results, tag, [&] { results.push_back(to_json(rigidity_integrand_report(model_for(c, name), r, p, quad))); });
      }
}

void run_stability(const SuiteConfig& c, Json& results) {
  for (const auto& e : stability_scan(c.mu0, c.scalar_R, c.params)) results.push_back(to_json(e));
}

void run_variation(const SuiteConfig& c, Json& results) {
  QuadratureSpec quad;
  quad.resolution = c.variation_resolution;
  const SolitonModel torus = model_for(c, "conformal-torus");
  for (const auto& p : c.params) {
    const Json tag = {{"kind", "variation"}, {"model", torus.name}, {"alpha", p.alpha}, {"beta", p.beta}};
    std::vector<Direction> dirs = {conformal_bump_direction(torus)};
    for (int i = 0; i < 5; ++i)
      dirs.push_back(as_direction(random_perturbation(c.seed + static_cast<std::uint64_t>(i)),
                                  "random-" + std::to_string(i)));
    for (const auto& d : dirs) {
      Json t = tag;
      t["id"] = "first-variation/" + d.name;
      capture(results, t, [&] {
        results.push_back(to_json(first_variation_check(p, torus, d, quad), "first-variation/" + d.name, torus.name));
      });
    }
    if (p.alpha != 0.0) {
      Json t = {{"kind", "variation"}, {"id", "flat-second-variation"}, {"model", "flat-torus"}, {"alpha", p.alpha}};
      capture(results, t, [&] {
        results.push_back(to_json(flat_second_variation_check(p.alpha, documented_tt_mode(), quad, p.beta),
                                  "flat-second-variation", "flat-torus"));
      });
    }
  }
  capture(results, {{"kind", "variation"}, {"id", "second-variation-R2"}, {"model", "flat-torus"}}, [&] {
    const auto sv = second_variation_R2(catalog_model("flat-torus"), documented_tt_mode(), quad);
    const double fd = sv.fd.value_or(0.0);
    results.push_back({{"kind", "variation"}, {"id", "second-variation-R2"}, {"model", "flat-torus"},
                       {"lhs", sv.form}, {"rhs", fd}, {"residual", std::max(std::abs(sv.form), std::abs(fd))},
                       {"tolerance", kFlatR2Tolerance},
                       {"verdict", verdict_name(std::abs(sv.form) <= kFlatR2Tolerance && std::abs(fd) <= kFlatR2Tolerance)},
                       {"resolution", quad.resolution}, {"note", sv.note}});
  });
  capture(results, {{"kind", "variation"}, {"id", "second-variation-R2"}, {"model", torus.name}}, [&] {
    const auto sv = second_variation_R2(torus, documented_tt_mode(), quad);
    results.push_back({{"kind", "variation"}, {"id", "second-variation-R2"}, {"model", torus.name},
                       {"lhs", sv.form}, {"verdict", "info"}, {"resolution", quad.resolution}, {"note", sv.note}});
  });
  for (const auto& p : c.params) {
    const double R = c.scalar_R;
    const auto s = spectral_consistency(p.alpha, p.beta, R);
    results.push_back({{"kind", "variation"}, {"id", "spectral-consistency"}, {"alpha", p.alpha}, {"beta", p.beta},
                       {"scalar_R", R}, {"lhs", s.printed_a0}, {"rhs", s.a0_displayed_vprime},
                       {"residual", std::abs(s.discrepancy)}, {"verdict", "info"},
                       {"note", "lhs: printed constant coefficient; rhs: composed with V' = R Delta_L h / 2; "
                                "with the -R^2 h / 4 term the composition gives " + fmt17(s.a0_full_vprime)}});
  }
  capture(results, {{"kind", "variation"}, {"id", "weyl-gradient"}}, [&] {
    const auto w = weyl_gradient_diagnostic(quad);
    results.push_back({{"kind", "variation"}, {"id", "weyl-gradient"}, {"lhs", w.fd}, {"rhs", w.bach_pairing},
                       {"residual", w.ratio}, {"verdict", "info"}, {"resolution", quad.resolution},
                       {"note", "residual column holds d/dt int |W|^2 divided by int <B, h> dV"}});
  });
}

void run_stokes(const SuiteConfig& c, Json& results) {
  capture(results, {{"kind", "stokes"}, {"id", "stokes"}}, [&] {
    const auto rep = stokes_selftest(c.resolution, c.stokes_fields, static_cast<unsigned>(c.seed));
    for (const auto& sc : rep.cases) {
      Json j = to_json(sc, kStokesTolerance);
      j["resolution"] = c.resolution;
      results.push_back(j);
    }
  });
}

}  // namespace

double parse_rational(const std::string& text) {
  auto parse_plain = [&](const std::string& s) {
    if (s.empty()) throw InputError("cannot parse number '" + text + "'");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) throw InputError("cannot parse number '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_plain(text);
  const double num = parse_plain(text.substr(0, slash));
  const double den = parse_plain(text.substr(slash + 1));
  if (den == 0.0) throw InputError("zero denominator in '" + text + "'");
  return num / den;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"identities", "pointwise", "rigidity",
                                                 "stability",  "variation", "stokes"};
  return names;
}

void validate(const SuiteConfig& c) {
  if (c.checks.empty()) throw InputError("no checks requested");
  for (const auto& ch : c.checks)
    if (std::find(check_names().begin(), check_names().end(), ch) == check_names().end())
      throw InputError("unknown check '" + ch + "'");
  for (const auto& m : c.models)
    if (!is_catalog_name(m)) throw InputError("unknown model '" + m + "'");
  for (const auto& id : c.identities)
    if (!is_identity_id(id)) throw InputError("unknown identity id '" + id + "'");
  for (double cv : c.c_values)
    if (!(cv > 0.0)) throw InputError("weight exponent c must be > 0");
  for (double r : c.rigidity_r)
    if (!(r > 0.0 && r < 1.0)) throw InputError("rigidity r must lie in (0, 1)");
  for (const auto& p : c.params)
    if (p.alpha == 0.0 && p.beta == 0.0) throw InputError("(alpha, beta) = (0, 0) is not a Bach-like pair");
  if (c.resolution < kMinResolution || c.variation_resolution < kMinResolution)
    throw InputError("resolution must be at least " + std::to_string(kMinResolution));
  if (c.points < 1) throw InputError("points must be positive");
  if (c.stokes_fields < 1) throw InputError("stokes fields must be positive");
  if (!(c.tolerance > 0.0)) throw InputError("tolerance must be positive");
  if (!(std::abs(c.amplitude) < 1.0)) throw InputError("amplitude must satisfy |a| < 1");
  if (c.format != "json" && c.format != "csv") throw InputError("format must be json or csv");
}

Json to_json(const SuiteConfig& c) {
  Json params = Json::array();
  for (const auto& p : c.params) params.push_back({{"alpha", p.alpha}, {"beta", p.beta}});
  return {{"checks", c.checks},
          {"model", c.models},
          {"identity", c.identities},
          {"r", c.r_values},
          {"r_offset", c.r_offsets},
          {"c", c.c_values},
          {"full_manifold", c.full_manifold},
          {"params", params},
          {"rigidity_r", c.rigidity_r},
          {"mu0", c.mu0},
          {"scalar_R", c.scalar_R},
          {"res", c.resolution},
          {"variation_res", c.variation_resolution},
          {"points", c.points},
          {"stokes_fields", c.stokes_fields},
          {"tol", c.tolerance},
          {"amplitude", c.amplitude},
          {"seed", c.seed},
          {"format", c.format}};
}

SuiteConfig config_from_json(const Json& j, SuiteConfig c) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "checks") {
      c.checks = json_strings(v, key);
    } else if (key == "model") {
      c.models = json_strings(v, key);
    } else if (key == "identity") {
      c.identities = json_strings(v, key);
    } else if (key == "r") {
      c.r_values = json_numbers(v, key);
    } else if (key == "r_offset") {
      c.r_offsets = json_numbers(v, key);
    } else if (key == "c") {
      c.c_values = json_numbers(v, key);
    } else if (key == "full_manifold") {
      if (!v.is_boolean()) throw InputError("config key 'full_manifold' must be a boolean");
      c.full_manifold = v.get<bool>();
    } else if (key == "params") {
      if (!v.is_array()) throw InputError("config key 'params' must be a list of {alpha, beta}");
      c.params.clear();
      for (const auto& p : v) {
        if (!p.is_object() || !p.contains("alpha") || !p.contains("beta"))
          throw InputError("each params entry needs alpha and beta");
        c.params.push_back({json_number(p["alpha"], "alpha"), json_number(p["beta"], "beta")});
      }
    } else if (key == "alpha" || key == "beta") {
      // single pair given flat; both must be present
      if (!j.contains("alpha") || !j.contains("beta")) throw InputError("alpha and beta must be given together");
      c.params = {{json_number(j["alpha"], "alpha"), json_number(j["beta"], "beta")}};
    } else if (key == "rigidity_r") {
      c.rigidity_r = json_numbers(v, key);
    } else if (key == "mu0") {
      c.mu0 = json_number(v, key);
    } else if (key == "scalar_R" || key == "scalar-R") {
      c.scalar_R = json_number(v, key);
    } else if (key == "res") {
      c.resolution = static_cast<int>(json_number(v, key));
    } else if (key == "variation_res") {
      c.variation_resolution = static_cast<int>(json_number(v, key));
    } else if (key == "points") {
      c.points = static_cast<int>(json_number(v, key));
    } else if (key == "stokes_fields") {
      c.stokes_fields = static_cast<int>(json_number(v, key));
    } else if (key == "tol") {
      c.tolerance = json_number(v, key);
    } else if (key == "amplitude") {
      c.amplitude = json_number(v, key);
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(json_number(v, key));
    } else if (key == "format") {
      if (!v.is_string()) throw InputError("config key 'format' must be a string");
      c.format = v.get<std::string>();
    } else if (key == "out") {
      if (!v.is_string()) throw InputError("config key 'out' must be a string");
      c.out = v.get<std::string>();
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  return c;
}

Json to_json(const IdentityReport& r) {
  Json j = {{"kind", "identity"}, {"id", r.identity}, {"model", r.model}};
  if (!r.params.full_manifold) j["r"] = r.params.r;
  j["c"] = r.params.c;
  j["full_manifold"] = r.params.full_manifold;
  j["uses_c"] = r.uses_c;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["residual"] = number(r.residual);
  j["tolerance"] = r.tolerance;
  j["verdict"] = to_string(r.verdict);
  j["resolution"] = r.resolution;
  j["empty_domain"] = r.empty_domain;
  j["note"] = r.note;
  return j;
}

Json to_json(const RigidityReport& r) {
  return {{"kind", "rigidity"},
          {"id", "rigidity-kernels"},
          {"model", r.model},
          {"r", r.r},
          {"alpha", r.params.alpha},
          {"beta", r.params.beta},
          {"lhs", number(r.combination)},
          {"rhs", 0.0},
          {"residual", number(std::abs(r.combination))},
          {"verdict", to_string(r.verdict)},
          {"empty_domain", r.empty_domain},
          {"min_f", r.min_f},
          {"kernels", {{"R", number(r.kernel_R)}, {"gradR", number(r.kernel_gradR)}, {"D", number(r.kernel_D)}}},
          {"signs", {{"R", r.sign_R}, {"gradR", r.sign_gradR}, {"D", r.sign_D}}},
          {"max_U", number(r.max_U)},
          {"einstein", r.einstein},
          {"flat", r.flat},
          {"note", r.note}};
}

Json to_json(const PointwiseCheck& c) {
  return {{"kind", "pointwise"}, {"id", c.id},          {"model", c.model},
          {"points", c.points},  {"lhs", c.max_error},  {"residual", c.max_error},
          {"tolerance", c.tolerance}, {"verdict", verdict_name(c.pass)}, {"note", c.note}};
}

Json to_json(const StabilityEntry& e) {
  return {{"kind", "stability"},
          {"id", "spectral-infimum"},
          {"alpha", e.params.alpha},
          {"beta", e.params.beta},
          {"mu0", e.verdict.mu0},
          {"scalar_R", e.R},
          {"infimum", number(e.verdict.infimum)},
          {"argmin", number(e.verdict.argmin)},
          {"stability", e.verdict.positive ? "positive" : "nonpositive"},
          {"verdict", "info"}};
}

Json to_json(const FiniteDifferenceReport& r, const std::string& id, const std::string& model) {
  Json diffs = Json::array();
  for (double d : r.differences) diffs.push_back(number(d));
  return {{"kind", "variation"},
          {"id", id},
          {"model", model},
          {"alpha", r.params.alpha},
          {"beta", r.params.beta},
          {"lhs", number(r.extrapolated)},
          {"rhs", number(r.predicted)},
          {"residual", number(r.mismatch)},
          {"tolerance", r.tolerance},
          {"verdict", verdict_name(r.pass)},
          {"steps", r.steps},
          {"rejected_steps", r.rejected_steps},
          {"differences", diffs},
          {"note", r.note}};
}

Json to_json(const StokesCase& c, double tolerance) {
  return {{"kind", "stokes"},
          {"id", "stokes-" + c.domain + "/" + c.field},
          {"model", c.domain},
          {"lhs", number(c.volume_integral)},
          {"rhs", number(c.boundary_integral)},
          {"residual", number(c.residual)},
          {"tolerance", tolerance},
          {"verdict", verdict_name(c.residual < tolerance)}};
}

SuiteReport make_report(const Json& config, Json results, double wall_time) {
  SuiteReport rep;
  for (const auto& r : results) {
    const std::string v = r.value("verdict", "error");
    if (v == "pass") {
      ++rep.summary.pass;
    } else if (v == "vacuous-pass") {
      ++rep.summary.vacuous;
    } else if (v == "info") {
      ++rep.summary.info;
    } else {
      ++rep.summary.fail;
    }
  }
  rep.document = {{"version", kToolVersion},
                  {"config", config},
                  {"results", std::move(results)},
                  {"summary",
                   {{"pass", rep.summary.pass},
                    {"fail", rep.summary.fail},
                    {"vacuous", rep.summary.vacuous},
                    {"info", rep.summary.info}}},
                  {"wall_time", wall_time}};
  return rep;
}

SuiteReport run_suite(const SuiteConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  Json results = Json::array();
  for (const auto& ch : config.checks) {
    if (ch == "identities") run_identities(config, results);
    if (ch == "pointwise") run_pointwise(config, results);
    if (ch == "rigidity") run_rigidity(config, results);
    if (ch == "stability") run_stability(config, results);
    if (ch == "variation") run_variation(config, results);
    if (ch == "stokes") run_stokes(config, results);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return make_report(to_json(config), std::move(results), wall);
}

Json catalog_json() {
  Json out = Json::array();
  for (const auto& name : catalog_names()) {
    const SolitonModel m = catalog_model(name);
    Json oracles = Json::object();
    for (const auto& [key, o] : m.oracles) {
      if (o.kind == ExactOracle::Kind::FrameMatrix) {
        Json rows = Json::array();
        for (int i = 0; i < kDim; ++i) {
          Json row = Json::array();
          for (int k = 0; k < kDim; ++k) row.push_back(o.matrix(i, k));
          rows.push_back(row);
        }
        oracles[key] = {{"frame", rows}};
      } else if (o.kind == ExactOracle::Kind::Scalar) {
        oracles[key] = {{"value", o.scalar}};
      } else {
        oracles[key] = {{"grad_f2_multiple", o.scalar}};
      }
    }
    const char* kind = m.integration == IntegrationKind::OrbitReduced ? "orbit-reduced"
                       : m.integration == IntegrationKind::Homogeneous ? "homogeneous"
                                                                        : "periodic";
    Json entry = {{"name", m.name}, {"description", m.description}, {"soliton", m.is_soliton},
                  {"integration", kind}};
    if (m.is_soliton) entry["min_f"] = m.min_f;
    entry["oracles"] = oracles;
    out.push_back(entry);
  }
  return out;
}

std::string render_json(const Json& document) { return document.dump(2) + "\n"; }

std::string render_csv(const Json& document) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) os << (i ? "," : "") << kCsvColumns[i];
  os << "\n";
  const Json& results = document.contains("results") ? document["results"] : document;
  for (const auto& r : results) {
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
      const std::string& col = kCsvColumns[i];
      os << (i ? "," : "");
      if (r.contains(col)) {
        os << csv_cell(r[col]);
      } else if (col == "note" && r.contains("error")) {
        os << csv_cell(r["error"]);
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string render_stability_csv(const std::vector<StabilityEntry>& entries, double mu0) {
  std::ostringstream os;
  os << "alpha,beta,mu0,R,inf,argmin,verdict\n";
  for (const auto& e : entries) {
    os << fmt17(e.params.alpha) << ',' << fmt17(e.params.beta) << ',' << fmt17(mu0) << ',' << fmt17(e.R) << ','
       << fmt17(e.verdict.infimum) << ',' << fmt17(e.verdict.argmin) << ','
       << (e.verdict.positive ? "positive" : "nonpositive") << "\n";
  }
  return os.str();
}

}  // namespace shrinker

// Command-line driver for the soliton tensor verification engine.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shrinker/report.hpp"

namespace {

using namespace shrinker;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config;
  std::vector<std::string> models, identities, r, c, alpha, beta;
  std::string mu0, scalar_R, tol, amplitude;
  int res = 0;
  int points = 0;
  long long seed = -1;
  bool full_manifold = false;
  std::string format, out;
};

std::vector<double> rationals(const std::vector<std::string>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(parse_rational(x));
  return out;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", f.out, "write the report to this file instead of stdout");
}

void add_model(CLI::App* app, Flags& f) {
  app->add_option("--model", f.models, "catalog model name (repeatable or comma separated)")->delimiter(',');
}

void add_res(CLI::App* app, Flags& f) {
  app->add_option("--res", f.res, "quadrature resolution per axis");
}

void add_params(CLI::App* app, Flags& f) {
  app->add_option("--alpha", f.alpha, "alpha values, paired with --beta (rationals allowed)")->delimiter(',');
  app->add_option("--beta", f.beta, "beta values, paired with --alpha (rationals allowed)")->delimiter(',');
}

SuiteConfig build_config(const Flags& f, std::vector<std::string> checks) {
  SuiteConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw InputError("cannot open config file '" + f.config + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("config file is not valid JSON: ") + e.what());
    }
    c = config_from_json(j, c);
  }
  if (!checks.empty()) c.checks = std::move(checks);
  if (!f.models.empty()) c.models = f.models;
  if (!f.identities.empty()) c.identities = f.identities;
  if (!f.r.empty()) {
    if (c.checks == std::vector<std::string>{"rigidity"}) {
      c.rigidity_r = rationals(f.r);
    } else {
      c.r_values = rationals(f.r);
    }
  }
  if (!f.c.empty()) c.c_values = rationals(f.c);
  if (f.alpha.size() != f.beta.size()) throw InputError("--alpha and --beta must have the same number of values");
  if (!f.alpha.empty()) {
    c.params.clear();
    for (std::size_t i = 0; i < f.alpha.size(); ++i)
      c.params.push_back({parse_rational(f.alpha[i]), parse_rational(f.beta[i])});
  }
  if (!f.mu0.empty()) c.mu0 = parse_rational(f.mu0);
  if (!f.scalar_R.empty()) c.scalar_R = parse_rational(f.scalar_R);
  if (!f.tol.empty()) c.tolerance = parse_rational(f.tol);
  if (!f.amplitude.empty()) c.amplitude = parse_rational(f.amplitude);
  if (f.res > 0) {
    if (c.checks == std::vector<std::string>{"variation"}) {
      c.variation_resolution = f.res;
    } else {
      c.resolution = f.res;
    }
  }
  if (f.points > 0) c.points = f.points;
  if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
  if (f.full_manifold) c.full_manifold = true;
  if (!f.format.empty()) c.format = f.format;
  if (!f.out.empty()) c.out = f.out;
  validate(c);
  return c;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw InputError("cannot write '" + out + "'");
  file << text;
}

int emit_report(const SuiteReport& rep, const SuiteConfig& c) {
  emit(c.format == "csv" ? render_csv(rep.document) : render_json(rep.document), c.out);
  const auto& s = rep.summary;
  std::fprintf(stderr, "pass %d  fail %d  vacuous %d  info %d\n", s.pass, s.fail, s.vacuous, s.info);
  return rep.ok() ? 0 : kExitFail;
}

ChartPoint parse_point(const std::string& text) {
  ChartPoint p;
  std::stringstream ss(text);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ',')) {
    if (n >= kDim) throw InputError("--point takes four coordinates");
    p.coords[n++] = parse_rational(item);
  }
  if (n != kDim) throw InputError("--point takes four coordinates");
  return p;
}

template <int R>
Json tensor_values(const Tensor<double, R>& t) {
  Json v = Json::array();
  for (int i = 0; i < Tensor<double, R>::size; ++i) v.push_back(t[i]);
  return v;
}

Json evaluate_tensor(const SolitonModel& model, const ChartPoint& p, const std::string& name,
                     const std::string& route, bool orthonormal) {
  const PointEvaluation e = evaluate_point(model, p);
  const GeometryCache& c = e.geo;
  const PotentialJet<double>* f = e.has_potential ? &e.pot : nullptr;
  auto need_f = [&]() -> const PotentialJet<double>& {
    if (!f) throw InputError("tensor '" + name + "' with route '" + route + "' needs a soliton potential");
    return *f;
  };
  auto mat = [&](const Mat<double>& m) {
    return Json{{"rank", 2}, {"values", tensor_values(orthonormal ? to_orthonormal(m, c.g) : m)}};
  };
  auto rank3 = [&](const Tensor<double, 3>& t) {
    return Json{{"rank", 3}, {"values", tensor_values(orthonormal ? to_orthonormal(t, c.g) : t)}};
  };
  if (name == "R") return {{"rank", 0}, {"values", {c.scalar}}};
  if (name == "Rc") return mat(c.ricci);
  if (name == "g") return mat(c.g);
  if (name == "U") return mat(route == "on-soliton" ? tensor_U_on_soliton(c, need_f()) : tensor_U_direct(c));
  if (name == "V") return mat(tensor_V(c));
  if (name == "B") {
    if (route == "uv") return mat(bach_uv(c));
    if (route == "d") return mat(bach_from_d(c, need_f()));
    return mat(bach_weyl(c));
  }
  if (name == "C") return rank3(cotton_tensor(c));
  if (name == "D") {
    if (route == "soliton") return rank3(d_tensor_soliton(c, need_f()));
    return rank3(d_tensor_conformal(c, need_f()));
  }
  if (name == "D2") return {{"rank", 0}, {"values", {norm_squared(d_tensor_conformal(c, need_f()), c.ginv)}}};
  if (name == "W2") return {{"rank", 0}, {"values", {inner(c.weyl, c.weyl, c.ginv)}}};
  if (name == "Rm") return {{"rank", 4}, {"values", tensor_values(c.riemann)}};
  if (name == "W") return {{"rank", 4}, {"values", tensor_values(c.weyl)}};
  throw InputError("unknown tensor '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor and integral-identity verification for four-dimensional gradient shrinking solitons"};
  app.require_subcommand(1);
  Flags f;

  auto* catalog = app.add_subcommand("catalog", "list catalog models and their exact oracles");
  catalog->add_option("--out", f.out, "output file");

  auto* eval = app.add_subcommand("eval", "evaluate one tensor at one chart point");
  std::string tensor = "U", point = "0,0,0,0", route, frame = "orthonormal";
  add_model(eval, f);
  eval->add_option("--tensor", tensor, "R, Rc, g, U, V, B, C, D, D2, W2, Rm, W");
  eval->add_option("--point", point, "four comma-separated chart coordinates");
  eval->add_option("--route", route, "U: direct|on-soliton; B: weyl|uv|d; D: conformal|soliton");
  eval->add_option("--frame", frame, "orthonormal or chart (rank 4 is always chart)")
      ->check(CLI::IsMember({"orthonormal", "chart"}));
  eval->add_option("--amplitude", f.amplitude, "conformal-torus amplitude");
  eval->add_option("--out", f.out, "output file");

  auto* verify = app.add_subcommand("verify", "pointwise suites: oracles, routes, traces, divergences");
  add_common(verify, f);
  add_model(verify, f);
  verify->add_option("--points", f.points, "random points per model");
  verify->add_option("--seed", f.seed, "sampling seed");
  verify->add_option("--amplitude", f.amplitude, "conformal-torus amplitude");

  auto* integrals = app.add_subcommand("integrals", "weighted integral identities");
  add_common(integrals, f);
  add_model(integrals, f);
  add_res(integrals, f);
  integrals->add_option("--identity", f.identities, "identity id (repeatable or comma separated)")->delimiter(',');
  integrals->add_option("--r", f.r, "sublevel values r (rationals allowed)")->delimiter(',');
  integrals->add_option("--c", f.c, "weight exponents c for the altered identities")->delimiter(',');
  integrals->add_option("--tol", f.tol, "relative tolerance");
  integrals->add_flag("--full-manifold", f.full_manifold, "integrate over the whole manifold instead of Omega_r");

  auto* rigidity = app.add_subcommand("rigidity", "sublevel rigidity kernels");
  add_common(rigidity, f);
  add_model(rigidity, f);
  add_res(rigidity, f);
  add_params(rigidity, f);
  rigidity->add_option("--r", f.r, "regular values r in (0, 1)")->delimiter(',');

  auto* stability = app.add_subcommand("stability", "closed-form spectral stability scan");
  add_common(stability, f);
  add_params(stability, f);
  stability->add_option("--mu0", f.mu0, "lower end of the TT spectrum");
  stability->add_option("--scalar-R", f.scalar_R, "scalar curvature of the Einstein background");

  auto* variation = app.add_subcommand("variation", "finite-difference checks of the functional layer");
  add_common(variation, f);
  add_res(variation, f);
  add_params(variation, f);
  variation->add_option("--scalar-R", f.scalar_R, "scalar curvature for the spectral consistency entry");
  variation->add_option("--amplitude", f.amplitude, "conformal-torus amplitude");
  variation->add_option("--seed", f.seed, "seed of the random perturbations");

  auto* stokes = app.add_subcommand("stokes", "divergence theorem self-test");
  add_common(stokes, f);
  add_res(stokes, f);
  stokes->add_option("--seed", f.seed, "seed of the random fields");

  auto* suite = app.add_subcommand("suite", "run the checks listed in --config (default: identities)");
  add_common(suite, f);

  auto* report = app.add_subcommand("report", "re-render a saved JSON report");
  std::string input;
  report->add_option("--in", input, "saved report")->required();
  report->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  report->add_option("--out", f.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (catalog->parsed()) {
      emit(render_json(catalog_json()), f.out);
      return 0;
    }
    if (eval->parsed()) {
      if (f.models.size() != 1) throw InputError("eval takes exactly one --model");
      ModelParams mp;
      if (!f.amplitude.empty()) mp.amplitude = parse_rational(f.amplitude);
      const SolitonModel model = catalog_model(f.models[0], mp);
      const ChartPoint p = parse_point(point);
      Json out = {{"version", kToolVersion}, {"model", model.name}, {"tensor", tensor}, {"route", route},
                  {"frame", frame}, {"point", p.coords}};
      const Json t = evaluate_tensor(model, p, tensor, route, frame == "orthonormal");
      out["rank"] = t["rank"];
      out["values"] = t["values"];
      emit(render_json(out), f.out);
      return 0;
    }
    if (report->parsed()) {
      std::ifstream in(input);
      if (!in) throw InputError("cannot open report '" + input + "'");
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw InputError(std::string("report is not valid JSON: ") + e.what());
      }
      if (!doc.contains("results") || !doc["results"].is_array()) throw InputError("report has no results list");
      const SuiteReport rep = make_report(doc.value("config", Json::object()), doc["results"],
                                          doc.value("wall_time", 0.0));
      SuiteConfig c;
      c.format = f.format.empty() ? "json" : f.format;
      c.out = f.out;
      // keep the saved wall time and version
      Json document = rep.document;
      document["version"] = doc.value("version", kToolVersion);
      emit(c.format == "csv" ? render_csv(document) : render_json(document), c.out);
      return rep.ok() ? 0 : kExitFail;
    }
    if (stability->parsed() && f.format == "csv") {
      const SuiteConfig c = build_config(f, {"stability"});
      emit(render_stability_csv(stability_scan(c.mu0, c.scalar_R, c.params), c.mu0), c.out);
      return 0;
    }
    std::vector<std::string> checks;
    if (verify->parsed()) checks = {"pointwise"};
    if (integrals->parsed()) checks = {"identities"};
    if (rigidity->parsed()) checks = {"rigidity"};
    if (stability->parsed()) checks = {"stability"};
    if (variation->parsed()) checks = {"variation"};
    if (stokes->parsed()) checks = {"stokes"};
    const SuiteConfig c = build_config(f, checks);
    return emit_report(run_suite(c), c);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

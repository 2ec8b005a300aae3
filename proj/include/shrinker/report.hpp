#pragma once

// Suite configuration, orchestration and machine-readable reports.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "shrinker/integrals.hpp"
#include "shrinker/pointwise.hpp"
#include "shrinker/variational.hpp"

namespace shrinker {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

// "1/3", "-2", "0.25" -> double; the division happens once in binary.
double parse_rational(const std::string& text);

struct SuiteConfig {
  // identities | pointwise | rigidity | stability | variation | stokes
  std::vector<std::string> checks = {"identities"};
  std::vector<std::string> models;      // empty: the four catalog solitons
  std::vector<std::string> identities;  // empty: every identity id
  std::vector<double> r_values;         // absolute; overrides r_offsets when set
  std::vector<double> r_offsets = {1.0};  // r = min f + offset
  std::vector<double> c_values = {1.0};
  bool full_manifold = false;
  std::vector<ParameterPair> params = {{1.0, 0.0}};
  std::vector<double> rigidity_r = {0.5};
  double mu0 = 0.0;
  double scalar_R = 0.0;
  int resolution = 64;
  int variation_resolution = 32;
  int points = 100;
  int stokes_fields = 10;
  double tolerance = 1e-6;
  double amplitude = 0.1;  // conformal-torus
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string out;
};

const std::vector<std::string>& check_names();

// Throws InputError naming the first invalid entry.
void validate(const SuiteConfig& config);

Json to_json(const SuiteConfig& config);
// Keys mirror the CLI flag names; numeric values may be rational strings.
SuiteConfig config_from_json(const Json& j, SuiteConfig base = {});

Json to_json(const IdentityReport& r);
Json to_json(const RigidityReport& r);
Json to_json(const PointwiseCheck& c);
Json to_json(const StabilityEntry& e);
Json to_json(const FiniteDifferenceReport& r, const std::string& id, const std::string& model);
Json to_json(const StokesCase& c, double tolerance);

struct SuiteSummary {
  int pass = 0;
  int fail = 0;
  int vacuous = 0;
  int info = 0;
};

struct SuiteReport {
  Json document;
  SuiteSummary summary;
  bool ok() const { return summary.fail == 0; }
};

// Validates first; per-check numeric errors become "error" results.
SuiteReport run_suite(const SuiteConfig& config);

// Envelope around an arbitrary result list, with the summary recomputed.
SuiteReport make_report(const Json& config, Json results, double wall_time);

Json catalog_json();

std::string render_json(const Json& document);
// Fixed columns, floats with 17 significant digits.
std::string render_csv(const Json& document);
std::string render_stability_csv(const std::vector<StabilityEntry>& entries, double mu0);

inline const std::vector<std::string> kCsvColumns = {
    "kind", "id", "model", "r", "c", "alpha", "beta", "lhs", "rhs", "residual", "tolerance", "verdict",
    "resolution", "empty_domain", "mu0", "scalar_R", "infimum", "argmin", "note"};

}  // namespace shrinker

#pragma once

// Closed-form gradient shrinking solitons and test metrics.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shrinker/chart.hpp"
#include "shrinker/curvature.hpp"

namespace shrinker {

// How integrals over the model reduce to low-dimensional quadrature.
enum class IntegrationKind {
  // f = min_f + s^2/4 with s the distance in a flat factor of dimension
  // flat_dim; everything is constant on the compact factor and on the
  // spheres |y| = s in the flat factor.
  OrbitReduced,
  // Homogeneous compact model: integrands are constant.
  Homogeneous,
  // Flat 4-torus [0, 2 pi)^4; integrands depend only on the active axes.
  Periodic,
};

struct ExactOracle {
  enum class Kind { FrameMatrix, Scalar, GradFSquaredMultiple };
  Kind kind = Kind::FrameMatrix;
  Mat<double> matrix;   // orthonormal-frame components
  double scalar = 0.0;  // value, or coefficient of |grad f|^2
};

struct ModelParams {
  double amplitude = 0.1;  // conformal-torus amplitude a
};

struct SolitonModel {
  std::string name;
  std::string description;
  std::shared_ptr<const SymmetricField> metric;
  std::shared_ptr<const ScalarField> potential;  // null for test metrics
  double rho = 0.5;
  bool is_soliton = false;
  ModelParams params;

  // Pointwise sampling box (excludes polar caps of sphere charts).
  std::array<double, kDim> chart_lo{}, chart_hi{};

  IntegrationKind integration = IntegrationKind::Periodic;
  double min_f = 0.0;
  int flat_dim = 0;                // OrbitReduced: dimension of the flat factor
  std::vector<int> flat_axes;      // chart axes of the flat factor
  double factor_volume = 1.0;      // exact volume of the compact factor
  double total_volume = 0.0;       // Homogeneous / Periodic
  ChartPoint base_point;           // orbit origin; flat coordinates replaced by (s, 0, ...)
  std::vector<int> active_axes;    // Periodic: axes the integrands depend on

  std::map<std::string, ExactOracle> oracles;

  bool has_potential() const { return potential != nullptr; }
};

const std::vector<std::string>& catalog_names();
bool is_catalog_name(const std::string& name);
// Throws InputError for an unknown name.
SolitonModel catalog_model(const std::string& name, const ModelParams& params = {});

// Cache plus potential data at one point.
struct PointEvaluation {
  GeometryCache geo;
  PotentialJet<double> pot;
  bool has_potential = false;
};

PointEvaluation evaluate_point(const SolitonModel& model, const ChartPoint& p);

// Uniform sample from the model's chart box.
ChartPoint random_point(const SolitonModel& model, std::mt19937_64& rng);

// Chart point of an orbit at flat-factor radius s.
ChartPoint orbit_point(const SolitonModel& model, double s);

struct ResidualReport {
  double soliton_equation = 0.0;  // max |Rc + nabla^2 f - rho g|
  double normalization = 0.0;     // |R + |grad f|^2 - f|
  double identity_a = 0.0;        // max |Rc(grad f) - grad R / 2|
  double identity_b = 0.0;        // |Delta f - (2 - R)|
  double identity_c = 0.0;        // max |nabla^2 f(grad f) - grad f / 2 + grad R / 2|
  double bochner = 0.0;           // |Delta R - <grad R, grad f> - R + 2 |Rc|^2|
  double max() const;
};

// Throws NotASolitonError for test metrics.
ResidualReport soliton_residuals(const SolitonModel& model, const ChartPoint& p);

// Throws InputError when the table has no entry.
const ExactOracle& exact_oracle(const SolitonModel& model, const std::string& tensor);

}  // namespace shrinker

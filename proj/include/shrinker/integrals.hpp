#pragma once

// Weighted volume and level-set quadrature on catalog models, and the
// integral identities verified on them.

#include <functional>
#include <string>
#include <vector>

#include "shrinker/catalog.hpp"
#include "shrinker/quadrature.hpp"

namespace shrinker {

// Pointwise scalars every integrand in scope is built from.
struct PointSample {
  ChartPoint point;
  bool has_potential = false;
  double f = 0.0;
  double R = 0.0;
  double lap_R = 0.0;
  double grad_f2 = 0.0;    // |grad f|^2
  double grad_R2 = 0.0;    // |grad R|^2
  double dR_df = 0.0;      // <grad R, grad f>
  double hessR_ff = 0.0;   // nabla^2 R(grad f, grad f)
  double Rc_ff = 0.0;      // Rc(grad f, grad f)
  double ric2 = 0.0;       // |Rc|^2
  double U_ff = 0.0;
  double V_ff = 0.0;
  double B_ff = 0.0;
  double D2 = 0.0;         // |D|^2
  double W2 = 0.0;         // |W|^2
  double U_max = 0.0;      // largest |U_ij| in the orthonormal frame
  double volume_element = 0.0;  // sqrt(det g) in the chart
};

PointSample sample_point(const SolitonModel& model, const ChartPoint& p);

std::vector<PointSample> sample_points(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                       Execution exec);

enum class DomainKind { Sublevel, FullManifold, Box, Torus };

struct DomainSpec {
  DomainKind kind = DomainKind::Sublevel;
  double r = 0.0;
  std::array<double, kDim> lo{}, hi{};  // Box only

  static DomainSpec sublevel(double r) { return {DomainKind::Sublevel, r, {}, {}}; }
  static DomainSpec full_manifold() { return {DomainKind::FullManifold, 0.0, {}, {}}; }
  static DomainSpec torus() { return {DomainKind::Torus, 0.0, {}, {}}; }
};

enum class QuadratureRule { GaussLegendre, Midpoint, PeriodicTrapezoid };

struct QuadratureSpec {
  int resolution = 64;
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  double tail_tolerance = 1e-12;
  Execution exec = Execution::Parallel;
};

inline constexpr int kMinResolution = 8;

struct WeightedNode {
  PointSample sample;
  double weight = 0.0;  // volume (or area) element times rule weight, no e^{-cf}
};

struct NodeSet {
  std::vector<WeightedNode> nodes;
  bool empty = false;
  int resolution = 0;
};

// Quadrature nodes covering the domain.  For full-manifold domains the
// truncation radius is chosen for the smallest weight exponent c_min.
NodeSet volume_nodes(const SolitonModel& model, const DomainSpec& domain, const QuadratureSpec& quad,
                     double c_min = 1.0);
// Nodes on the level set {f = r} with induced area weights.
NodeSet boundary_nodes(const SolitonModel& model, double r, const QuadratureSpec& quad);

using Integrand = std::function<double(const PointSample&)>;

struct IntegralResult {
  double value = 0.0;
  double max_abs_integrand = 0.0;
  bool empty_domain = false;
  std::size_t nodes = 0;
};

// sum of weight * integrand * exp(-c f) over the node set.
IntegralResult integrate_nodes(const NodeSet& set, const Integrand& integrand, double c);

IntegralResult integrate(const SolitonModel& model, const Integrand& integrand, const DomainSpec& domain,
                         double c, const QuadratureSpec& quad);
IntegralResult boundary_integrate(const SolitonModel& model, const Integrand& integrand, double r, double c,
                                  const QuadratureSpec& quad);

enum class Verdict { Pass, Fail, VacuousPass };
std::string to_string(Verdict v);

struct IdentityParams {
  double r = 0.0;
  bool full_manifold = false;
  double c = 1.0;
};

struct IdentityReport {
  std::string identity;
  std::string model;
  IdentityParams params;
  bool uses_c = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Fail;
  int resolution = 0;
  bool empty_domain = false;
  std::string note;
};

inline constexpr double kVacuousThreshold = 1e-10;

const std::vector<std::string>& identity_ids();
bool is_identity_id(const std::string& id);
// Whether the identity carries a free weight exponent c.
bool identity_uses_c(const std::string& id);

IdentityReport verify_identity(const std::string& id, const SolitonModel& model, const IdentityParams& params,
                               const QuadratureSpec& quad, double tolerance = 1e-6);

struct DecayReport {
  std::string model;
  double alpha = 0.0;
  std::vector<double> r_values;
  std::vector<double> values;  // e^{-alpha r} int_{Omega_r} |grad R|^2
  bool nonincreasing = false;
  bool below_tolerance = false;
};

DecayReport decay_probe(const SolitonModel& model, double alpha, const std::vector<double>& r_values,
                        const QuadratureSpec& quad, double tolerance = 1e-8);

// Self-convergence of a torus integral between two resolutions.
struct ConvergenceReport {
  int coarse = 0;
  int fine = 0;
  double coarse_value = 0.0;
  double fine_value = 0.0;
  double relative_change = 0.0;
};

ConvergenceReport torus_convergence(const SolitonModel& model, const Integrand& integrand, int coarse, int fine,
                                    Execution exec = Execution::Parallel);

struct RigidityReport {
  std::string model;
  double r = 0.0;
  ParameterPair params;
  bool empty_domain = false;
  double min_f = 0.0;
  double kernel_R = 0.0;     // int (R^2 - R)|grad f|^2 / (1-f)^2
  double kernel_gradR = 0.0; // int (f - r)/((1-f)(1-r)) |grad R|^2
  double kernel_D = 0.0;     // int |D|^2 / (1-f)^3
  int sign_R = 0, sign_gradR = 0, sign_D = 0;
  double combination = 0.0;  // -6 beta K_D + (alpha - 3 beta)/4 (K_R + K_gradR)
  double max_U = 0.0;        // sampled sup |U| on the model
  bool einstein = false;
  bool flat = false;
  Verdict verdict = Verdict::Fail;
  std::string note;
};

// Throws InputError unless 0 < r < 1.
RigidityReport rigidity_integrand_report(const SolitonModel& model, double r, const ParameterPair& params,
                                         const QuadratureSpec& quad);

struct StokesCase {
  std::string domain;  // "torus" or "ball"
  std::string field;
  double volume_integral = 0.0;
  double boundary_integral = 0.0;
  double residual = 0.0;
};

struct StokesReport {
  std::vector<StokesCase> cases;
  double max_residual = 0.0;
};

// Divergence theorem on the flat torus and on the Euclidean ball of radius 2
// for randomized smooth fields plus the position field and a field vanishing
// to high order on the sphere.
StokesReport stokes_selftest(int resolution, int random_fields = 10, unsigned seed = 20240601u,
                             Execution exec = Execution::Parallel);

}  // namespace shrinker

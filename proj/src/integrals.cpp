#include "shrinker/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace shrinker {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRegularGradient = 1e-6;
constexpr double kHarmonicLimit = 1e-8;

double unit_sphere_area(int m) {
  // |S^{m-1}| for the unit sphere in R^m
  switch (m) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    case 4: return 2.0 * kPi * kPi;
    default: throw InputError("flat factor dimension out of range");
  }
}

Rule1D radial_rule(const QuadratureSpec& quad, double a, double b) {
  if (quad.rule == QuadratureRule::Midpoint) return midpoint_rule(quad.resolution, a, b);
  return gauss_legendre(quad.resolution, a, b);
}

void check_resolution(const QuadratureSpec& quad) {
  if (quad.resolution < kMinResolution)
    throw InputError("quadrature resolution " + std::to_string(quad.resolution) + " is below the floor of " +
                     std::to_string(kMinResolution));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

NodeSet make_set(const SolitonModel& model, const std::vector<ChartPoint>& points, const std::vector<double>& w,
                 const QuadratureSpec& quad) {
  NodeSet set;
  set.resolution = quad.resolution;
  const auto samples = sample_points(model, points, quad.exec);
  set.nodes.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) set.nodes.push_back({samples[i], w[i]});
  return set;
}

NodeSet periodic_nodes(const SolitonModel& model, const QuadratureSpec& quad) {
  const std::vector<int>& active = model.active_axes;
  const Rule1D rule = periodic_trapezoid(quad.resolution, 0.0, 2 * kPi);
  const int n = quad.resolution;
  std::size_t total = 1;
  for (std::size_t i = 0; i < active.size(); ++i) total *= static_cast<std::size_t>(n);
  const double inactive = std::pow(2 * kPi, kDim - static_cast<int>(active.size()));
  std::vector<ChartPoint> points(total);
  std::vector<double> base(total, inactive);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t q = active.size(); q-- > 0;) {
      const int idx = static_cast<int>(rest % n);
      rest /= n;
      points[flat].coords[active[q]] = rule.nodes[idx];
      base[flat] *= rule.weights[idx];
    }
  }
  NodeSet set = make_set(model, points, base, quad);
  for (auto& node : set.nodes) node.weight *= node.sample.volume_element;
  return set;
}

NodeSet box_nodes(const SolitonModel& model, const DomainSpec& domain, const QuadratureSpec& quad) {
  std::array<Rule1D, kDim> rules;
  for (int a = 0; a < kDim; ++a) rules[a] = gauss_legendre(quad.resolution, domain.lo[a], domain.hi[a]);
  const int n = quad.resolution;
  const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
  std::vector<ChartPoint> points(total);
  std::vector<double> w(total, 1.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int a = kDim - 1; a >= 0; --a) {
      const int idx = static_cast<int>(rest % n);
      rest /= n;
      points[flat].coords[a] = rules[a].nodes[idx];
      w[flat] *= rules[a].weights[idx];
    }
  }
  NodeSet set = make_set(model, points, w, quad);
  for (auto& node : set.nodes) node.weight *= node.sample.volume_element;
  return set;
}

}  // namespace

PointSample sample_point(const SolitonModel& model, const ChartPoint& p) {
  const PointEvaluation e = evaluate_point(model, p);
  const GeometryCache& c = e.geo;
  PointSample s;
  s.point = p;
  s.volume_element = c.volume_element;
  s.R = c.scalar;
  s.lap_R = c.lap_scalar;
  s.grad_R2 = inner(c.d_scalar, c.d_scalar, c.ginv);
  s.ric2 = inner(c.ricci, c.ricci, c.ginv);
  s.W2 = inner(c.weyl, c.weyl, c.ginv);
  const Mat<double> u = tensor_U_direct(c);
  s.U_max = max_abs(to_orthonormal(u, c.g));
  if (e.has_potential) {
    const PotentialJet<double>& f = e.pot;
    s.has_potential = true;
    s.f = f.f;
    s.grad_f2 = inner(f.df, f.df, c.ginv);
    s.dR_df = inner(c.d_scalar, f.df, c.ginv);
    s.hessR_ff = evaluate_on_covectors(c.dd_scalar, f.df, f.df, c.ginv);
    s.Rc_ff = evaluate_on_covectors(c.ricci, f.df, f.df, c.ginv);
    s.U_ff = evaluate_on_covectors(u, f.df, f.df, c.ginv);
    s.V_ff = evaluate_on_covectors(tensor_V(c), f.df, f.df, c.ginv);
    s.B_ff = evaluate_on_covectors(bach_weyl(c), f.df, f.df, c.ginv);
    s.D2 = norm_squared(d_tensor_conformal(c, f), c.ginv);
  }
  return s;
}

std::vector<PointSample> sample_points(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                       Execution exec) {
  return map_nodes<PointSample>(
      points.size(), [&](std::size_t i) { return sample_point(model, points[i]); }, exec);
}

NodeSet volume_nodes(const SolitonModel& model, const DomainSpec& domain, const QuadratureSpec& quad,
                     double c_min) {
  check_resolution(quad);
  if (domain.kind == DomainKind::Box) return box_nodes(model, domain, quad);
  if (model.integration == IntegrationKind::Periodic) {
    if (domain.kind == DomainKind::Sublevel)
      throw DomainError("model '" + model.name + "' has no potential, so sublevel sets are undefined");
    return periodic_nodes(model, quad);
  }
  if (domain.kind == DomainKind::Torus) throw DomainError("model '" + model.name + "' is not a torus");

  NodeSet set;
  set.resolution = quad.resolution;
  const bool full = domain.kind == DomainKind::FullManifold;
  if (!full && domain.r < model.min_f) {
    set.empty = true;
    return set;
  }
  if (model.integration == IntegrationKind::Homogeneous) {
    return make_set(model, {model.base_point}, {model.total_volume}, quad);
  }
  double s_max = 0.0;
  const int m = model.flat_dim;
  if (full) {
    if (!(c_min > 0.0)) throw DomainError("full-manifold integrals on a non-compact model need a weight c > 0");
    // integrands in scope grow at most like s^8
    s_max = gaussian_tail_radius(0.5 * (m + 8), c_min, quad.tail_tolerance);
  } else {
    s_max = 2.0 * std::sqrt(domain.r - model.min_f);
  }
  if (s_max == 0.0) return set;
  const Rule1D rule = radial_rule(quad, 0.0, s_max);
  std::vector<ChartPoint> points;
  std::vector<double> w;
  const double orbit = model.factor_volume * unit_sphere_area(m);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes[i];
    points.push_back(orbit_point(model, s));
    w.push_back(rule.weights[i] * orbit * std::pow(s, m - 1));
  }
  return make_set(model, points, w, quad);
}

NodeSet boundary_nodes(const SolitonModel& model, double r, const QuadratureSpec& quad) {
  check_resolution(quad);
  if (model.integration == IntegrationKind::Periodic)
    throw DomainError("model '" + model.name + "' has no potential, so level sets are undefined");
  NodeSet set;
  set.resolution = quad.resolution;
  if (r < model.min_f) {
    set.empty = true;
    return set;
  }
  if (model.integration == IntegrationKind::Homogeneous) {
    if (r == model.min_f) throw DomainError("r = " + fmt(r) + " is a critical value of f (f is constant)");
    return set;  // level set is empty
  }
  const double s_r = 2.0 * std::sqrt(r - model.min_f);
  const int m = model.flat_dim;
  NodeSet out = make_set(model, {orbit_point(model, s_r)},
                         {model.factor_volume * unit_sphere_area(m) * std::pow(s_r, m - 1)}, quad);
  for (const auto& node : out.nodes)
    if (!(std::sqrt(node.sample.grad_f2) > kRegularGradient))
      throw DomainError("r = " + fmt(r) + " is not a regular value of f (|grad f| vanishes on the level set)");
  return out;
}

IntegralResult integrate_nodes(const NodeSet& set, const Integrand& integrand, double c) {
  IntegralResult res;
  res.empty_domain = set.empty;
  res.nodes = set.nodes.size();
  std::vector<double> terms(set.nodes.size());
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const WeightedNode& node = set.nodes[i];
    const double v = integrand(node.sample);
    res.max_abs_integrand = std::max(res.max_abs_integrand, std::abs(v));
    const double weight = c == 0.0 ? 1.0 : std::exp(-c * node.sample.f);
    terms[i] = node.weight * v * weight;
  }
  res.value = pairwise_sum(terms);
  return res;
}

IntegralResult integrate(const SolitonModel& model, const Integrand& integrand, const DomainSpec& domain, double c,
                         const QuadratureSpec& quad) {
  if (c < 0.0) throw InputError("weight exponent c must be >= 0");
  return integrate_nodes(volume_nodes(model, domain, quad, c), integrand, c);
}

IntegralResult boundary_integrate(const SolitonModel& model, const Integrand& integrand, double r, double c,
                                  const QuadratureSpec& quad) {
  return integrate_nodes(boundary_nodes(model, r, quad), integrand, c);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::VacuousPass: return "vacuous-pass";
  }
  return "unknown";
}

const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = {"L2.2-1", "L2.2-2", "L2.2-3", "L2.2-4", "L2.2-5", "L2.2-6",
                                               "L3.1",   "EQ-VW",  "L5.1",   "L7.1-1", "L7.1-2", "L7.1-3",
                                               "L7.3",   "L7.4"};
  return ids;
}

bool is_identity_id(const std::string& id) {
  const auto& ids = identity_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

bool identity_uses_c(const std::string& id) { return id.rfind("L7.", 0) == 0; }

namespace {

bool identity_is_weighted(const std::string& id) {
  return !(id == "L2.2-1" || id == "L2.2-2" || id == "L2.2-3");
}

bool identity_needs_boundary(const std::string& id) {
  return id == "L2.2-1" || id == "L2.2-3" || id == "L2.2-5";
}

double unit_normal_flux(const PointSample& s) {
  // <grad R, n> with n = grad f / |grad f|
  return s.dR_df / std::sqrt(s.grad_f2);
}

// Evaluates the volume and boundary terms of one identity and tracks the
// largest integrand magnitude seen, which decides vacuity.
class TermEvaluator {
 public:
  TermEvaluator(const NodeSet& volume, const NodeSet* boundary, bool full)
      : volume_(volume), boundary_(boundary), full_(full) {}

  double vol(const Integrand& f, double c) { return track(integrate_nodes(volume_, f, c)); }
  // Boundary terms vanish in the full-manifold limit.
  double bnd(const Integrand& f, double c) {
    if (full_ || boundary_ == nullptr) return 0.0;
    return track(integrate_nodes(*boundary_, f, c));
  }
  double max_integrand() const { return max_; }

 private:
  double track(const IntegralResult& r) {
    max_ = std::max(max_, r.max_abs_integrand);
    return r.value;
  }
  const NodeSet& volume_;
  const NodeSet* boundary_;
  bool full_;
  double max_ = 0.0;
};

}  // namespace

IdentityReport verify_identity(const std::string& id, const SolitonModel& model, const IdentityParams& params,
                               const QuadratureSpec& quad, double tolerance) {
  if (!is_identity_id(id)) throw InputError("unknown identity id '" + id + "'");
  if (!model.is_soliton) throw NotASolitonError("identity " + id + " needs a soliton; '" + model.name + "' is not");
  const bool uses_c = identity_uses_c(id);
  const double c = uses_c ? params.c : 1.0;
  if (uses_c && !(c > 0.0)) throw InputError("identity " + id + " needs c > 0");
  const bool compact = model.integration == IntegrationKind::Homogeneous;
  const bool full = params.full_manifold;
  if (full && !compact && !identity_is_weighted(id))
    throw DomainError("identity " + id + " is unweighted; the full-manifold limit is only defined for weighted identities");

  IdentityReport rep;
  rep.identity = id;
  rep.model = model.name;
  rep.params = params;
  rep.params.c = c;
  rep.uses_c = uses_c;
  rep.tolerance = tolerance;
  rep.resolution = quad.resolution;

  const DomainSpec domain = full ? DomainSpec::full_manifold() : DomainSpec::sublevel(params.r);
  const NodeSet vol = volume_nodes(model, domain, quad, c);
  rep.empty_domain = vol.empty;
  if (vol.empty) {
    rep.verdict = Verdict::VacuousPass;
    rep.note = "empty sublevel set: r = " + fmt(params.r) + " < min f = " + fmt(model.min_f);
    return rep;
  }
  for (const auto& node : vol.nodes)
    if (std::abs(node.sample.lap_R) > kHarmonicLimit)
      throw InputError("identity " + id + " assumes Delta R = 0, violated on '" + model.name + "'");

  NodeSet bnd;
  const bool want_boundary = !full && identity_needs_boundary(id);
  if (want_boundary) bnd = boundary_nodes(model, params.r, quad);
  TermEvaluator t(vol, want_boundary ? &bnd : nullptr, full);
  const double r = params.r;
  // e^{-c r} factors belong to boundary contributions and vanish in the limit
  const double decay = full ? 0.0 : std::exp(-c * r);
  const double decay1 = full ? 0.0 : std::exp(-r);

  auto gradR2 = [](const PointSample& s) { return s.grad_R2; };
  auto dRdf = [](const PointSample& s) { return s.dR_df; };
  double lhs = 0.0, rhs = 0.0;
  double aux_residual = 0.0;
  std::string aux_note;

  if (id == "L2.2-1") {
    lhs = t.bnd(unit_normal_flux, 0.0);
  } else if (id == "L2.2-2") {
    lhs = t.vol(dRdf, 0.0);
  } else if (id == "L2.2-3") {
    lhs = t.vol(gradR2, 0.0);
    rhs = t.bnd([](const PointSample& s) { return s.R * unit_normal_flux(s); }, 0.0);
    const double rhs2 = -t.bnd([](const PointSample& s) { return std::sqrt(s.grad_f2) * s.dR_df; }, 0.0);
    aux_residual = std::abs(rhs - rhs2) / (1.0 + std::abs(rhs) + std::abs(rhs2));
    aux_note = "second boundary form = " + fmt(rhs2);
  } else if (id == "L2.2-4") {
    lhs = t.vol(dRdf, 1.0);
  } else if (id == "L2.2-5") {
    lhs = t.vol([](const PointSample& s) { return s.R * s.Rc_ff; }, 1.0);
    rhs = 0.5 * t.bnd([](const PointSample& s) { return std::sqrt(s.grad_f2) * s.dR_df; }, 1.0) +
          0.5 * t.vol(gradR2, 1.0);
  } else if (id == "L2.2-6") {
    lhs = t.vol([](const PointSample& s) { return s.f * s.dR_df; }, 1.0);
  } else if (id == "L3.1") {
    lhs = t.vol([](const PointSample& s) { return s.hessR_ff; }, 1.0);
    rhs = -decay1 * t.vol(gradR2, 0.0) + 0.5 * t.vol(gradR2, 1.0);
  } else if (id == "EQ-VW") {
    lhs = t.vol([](const PointSample& s) { return s.V_ff; }, 1.0);
    rhs = 0.5 * decay1 * t.vol(gradR2, 0.0) - 0.25 * t.vol([](const PointSample& s) { return s.R * s.R * s.grad_f2; }, 1.0);
  } else if (id == "L5.1") {
    lhs = t.vol([](const PointSample& s) { return s.B_ff; }, 1.0);
    rhs = -0.5 * t.vol([](const PointSample& s) { return s.D2; }, 1.0);
  } else if (id == "L7.1-1") {
    lhs = t.vol(dRdf, c);
  } else if (id == "L7.1-2") {
    lhs = t.vol([](const PointSample& s) { return s.R * s.dR_df; }, c);
    rhs = t.vol(gradR2, c) / c - decay / c * t.vol(gradR2, 0.0);
  } else if (id == "L7.1-3") {
    lhs = t.vol([](const PointSample& s) { return s.f * s.dR_df; }, c);
  } else if (id == "L7.3") {
    lhs = t.vol([](const PointSample& s) { return s.U_ff; }, c);
    rhs = 0.25 * t.vol([](const PointSample& s) { return (s.R * s.R - 2.0 * s.ric2) * s.grad_f2; }, c);
    const double cc = c;
    const double rhs2 = 0.25 * t.vol([cc](const PointSample& s) {
                          return s.R * s.R * s.grad_f2 - s.R * s.grad_f2 + s.grad_R2 / cc;
                        }, c) -
                        decay / (4.0 * c) * t.vol(gradR2, 0.0);
    aux_residual = std::abs(lhs - rhs2) / (1.0 + std::abs(lhs) + std::abs(rhs2));
    aux_note = "second form = " + fmt(rhs2);
  } else if (id == "L7.4") {
    lhs = t.vol([](const PointSample& s) { return s.V_ff; }, c);
    const double k = 3.0 * (c - 1.0) / (2.0 * c);
    rhs = -t.vol([k](const PointSample& s) { return 0.25 * s.R * s.R * s.grad_f2 + k * s.grad_R2; }, c) +
          (4.0 * c - 3.0) * decay / (2.0 * c) * t.vol(gradR2, 0.0);
  }

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs);
  const bool main_ok = rep.residual <= tolerance * (1.0 + std::abs(lhs) + std::abs(rhs));
  const bool aux_ok = aux_residual <= tolerance;
  if (!aux_note.empty()) rep.note = aux_note;
  if (main_ok && aux_ok && t.max_integrand() < kVacuousThreshold) {
    rep.verdict = Verdict::VacuousPass;
    std::string why = "every term integrand vanishes identically on this model";
    if (id == "L2.2-3") why += "; grad R = 0 on every catalog soliton, so only the degenerate form is exercised";
    rep.note = rep.note.empty() ? why : why + "; " + rep.note;
  } else {
    rep.verdict = (main_ok && aux_ok) ? Verdict::Pass : Verdict::Fail;
  }
  return rep;
}

DecayReport decay_probe(const SolitonModel& model, double alpha, const std::vector<double>& r_values,
                        const QuadratureSpec& quad, double tolerance) {
  if (!(alpha > 0.0)) throw InputError("decay probe needs alpha > 0");
  for (std::size_t i = 1; i < r_values.size(); ++i)
    if (!(r_values[i] > r_values[i - 1])) throw InputError("decay probe r values must be increasing");
  DecayReport rep;
  rep.model = model.name;
  rep.alpha = alpha;
  rep.r_values = r_values;
  for (double r : r_values) {
    const auto res = integrate(model, [](const PointSample& s) { return s.grad_R2; }, DomainSpec::sublevel(r), 0.0, quad);
    rep.values.push_back(std::exp(-alpha * r) * res.value);
  }
  rep.nonincreasing = true;
  for (std::size_t i = 1; i < rep.values.size(); ++i)
    if (rep.values[i] > rep.values[i - 1] + 1e-14) rep.nonincreasing = false;
  rep.below_tolerance = rep.values.empty() || std::abs(rep.values.back()) <= tolerance;
  return rep;
}

ConvergenceReport torus_convergence(const SolitonModel& model, const Integrand& integrand, int coarse, int fine,
                                    Execution exec) {
  QuadratureSpec q;
  q.rule = QuadratureRule::PeriodicTrapezoid;
  q.exec = exec;
  ConvergenceReport rep;
  rep.coarse = coarse;
  rep.fine = fine;
  q.resolution = coarse;
  rep.coarse_value = integrate(model, integrand, DomainSpec::torus(), 0.0, q).value;
  q.resolution = fine;
  rep.fine_value = integrate(model, integrand, DomainSpec::torus(), 0.0, q).value;
  rep.relative_change = std::abs(rep.fine_value - rep.coarse_value) / std::max(1e-300, std::abs(rep.fine_value));
  return rep;
}

RigidityReport rigidity_integrand_report(const SolitonModel& model, double r, const ParameterPair& params,
                                         const QuadratureSpec& quad) {
  if (!(r > 0.0 && r < 1.0))
    throw InputError("rigidity kernels are defined only for regular values r in (0, 1); got r = " + fmt(r));
  if (!model.is_soliton) throw NotASolitonError("rigidity report needs a soliton; '" + model.name + "' is not");
  RigidityReport rep;
  rep.model = model.name;
  rep.r = r;
  rep.params = params;
  rep.min_f = model.min_f;

  // pointwise character of the model from a fixed sample
  std::mt19937_64 rng(7);
  double einstein_defect = 0.0, curvature = 0.0;
  for (int i = 0; i < 16; ++i) {
    const ChartPoint p = random_point(model, rng);
    const PointEvaluation e = evaluate_point(model, p);
    rep.max_U = std::max(rep.max_U, max_abs(to_orthonormal(tensor_U_direct(e.geo), e.geo.g)));
    curvature = std::max(curvature, max_abs(e.geo.riemann));
    for (int k = 0; k < Mat<double>::size; ++k)
      einstein_defect = std::max(einstein_defect, std::abs(e.geo.ricci[k] - 0.25 * e.geo.scalar * e.geo.g[k]));
  }
  rep.einstein = einstein_defect < 1e-10;
  rep.flat = curvature < 1e-10;

  const NodeSet vol = volume_nodes(model, DomainSpec::sublevel(r), quad);
  rep.empty_domain = vol.empty;
  if (!vol.empty) {
    const double rr = r;
    rep.kernel_R = integrate_nodes(vol, [](const PointSample& s) {
                     return (s.R * s.R - s.R) * s.grad_f2 / ((1.0 - s.f) * (1.0 - s.f));
                   }, 0.0).value;
    rep.kernel_gradR = integrate_nodes(vol, [rr](const PointSample& s) {
                         return (s.f - rr) / ((1.0 - s.f) * (1.0 - rr)) * s.grad_R2;
                       }, 0.0).value;
    rep.kernel_D = integrate_nodes(vol, [](const PointSample& s) {
                     return s.D2 / ((1.0 - s.f) * (1.0 - s.f) * (1.0 - s.f));
                   }, 0.0).value;
  }
  auto sign = [](double x) { return x > 1e-14 ? 1 : (x < -1e-14 ? -1 : 0); };
  rep.sign_R = sign(rep.kernel_R);
  rep.sign_gradR = sign(rep.kernel_gradR);
  rep.sign_D = sign(rep.kernel_D);
  rep.combination = -6.0 * params.beta * rep.kernel_D +
                    0.25 * (params.alpha - 3.0 * params.beta) * (rep.kernel_R + rep.kernel_gradR);

  std::string note;
  if (rep.empty_domain) {
    rep.verdict = Verdict::VacuousPass;
    note = "Omega_r is empty: min f = " + fmt(model.min_f) + " >= r = " + fmt(r) + ", so every kernel is vacuous";
    if (rep.max_U < 1e-8 && !rep.einstein && !rep.flat)
      note += ". Tension: U vanishes identically here (sampled max |U| = " + fmt(rep.max_U) +
              ") although the model is neither Einstein nor flat; the sublevel-set argument restricted to r < 1 "
              "never sees it because Omega_r is empty. Both facts are reported without adjudication";
  } else {
    const double scale = 1.0 + std::abs(rep.kernel_R) + std::abs(rep.kernel_gradR) + std::abs(rep.kernel_D);
    rep.verdict = std::abs(rep.combination) <= 1e-10 * scale ? Verdict::Pass : Verdict::Fail;
    note = "kernels evaluated on a nonempty Omega_r; the combined identity assumes alpha U + beta V = 0";
  }
  rep.note = note;
  return rep;
}

}  // namespace shrinker

#include "shrinker/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace shrinker {

namespace {

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

PointwiseCheck make_check(const std::string& id, const SolitonModel& model, std::size_t points,
                          const std::vector<double>& errors, double tol) {
  PointwiseCheck c;
  c.id = id;
  c.model = model.name;
  c.points = static_cast<int>(points);
  c.max_error = max_of(errors);
  c.tolerance = tol;
  c.pass = c.max_error <= tol;
  return c;
}

template <int R>
double max_diff(const Tensor<double, R>& a, const Tensor<double, R>& b) {
  return max_abs(Tensor<double, R>(a - b));
}

double oracle_error(const SolitonModel& model, const ExactOracle& o, const std::string& tensor,
                    const PointEvaluation& e) {
  const GeometryCache& c = e.geo;
  if (o.kind == ExactOracle::Kind::Scalar) {
    double value = 0.0;
    if (tensor == "R") {
      value = c.scalar;
    } else if (tensor == "D2" && e.has_potential) {
      value = norm_squared(d_tensor_conformal(c, e.pot), c.ginv);
    } else {
      throw InputError("no evaluator for scalar oracle '" + tensor + "' on '" + model.name + "'");
    }
    return std::abs(value - o.scalar) / (1.0 + std::abs(o.scalar));
  }
  if (o.kind == ExactOracle::Kind::GradFSquaredMultiple) {
    if (!e.has_potential) throw InputError("oracle '" + tensor + "' needs a potential");
    const double grad_f2 = inner(e.pot.df, e.pot.df, c.ginv);
    const double expected = o.scalar * grad_f2;
    return std::abs(norm_squared(d_tensor_conformal(c, e.pot), c.ginv) - expected) / (1.0 + std::abs(expected));
  }
  Mat<double> t;
  if (tensor == "U") {
    t = tensor_U_direct(c);
  } else if (tensor == "V") {
    t = tensor_V(c);
  } else if (tensor == "B") {
    t = bach_weyl(c);
  } else if (tensor == "Rc") {
    t = c.ricci;
  } else {
    throw InputError("no evaluator for oracle '" + tensor + "' on '" + model.name + "'");
  }
  return max_diff(to_orthonormal(t, c.g), o.matrix) / (1.0 + max_abs(o.matrix));
}

}  // namespace

std::vector<ChartPoint> sample_chart_points(const SolitonModel& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_point(model, rng));
  return out;
}

std::vector<ChartPoint> torus_grid_points(const SolitonModel& model, int n) {
  const Rule1D rule = periodic_trapezoid(n, 0.0, 2 * std::numbers::pi);
  std::vector<ChartPoint> out;
  const auto& axes = model.active_axes;
  std::size_t total = 1;
  for (std::size_t i = 0; i < axes.size(); ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    ChartPoint p;
    std::size_t rest = flat;
    for (std::size_t q = axes.size(); q-- > 0;) {
      p.coords[axes[q]] = rule.nodes[rest % n];
      rest /= n;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<PointwiseCheck> oracle_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                          Execution exec) {
  std::vector<PointwiseCheck> out;
  const auto evals = map_nodes<PointEvaluation>(
      points.size(), [&](std::size_t i) { return evaluate_point(model, points[i]); }, exec);
  for (const auto& [name, oracle] : model.oracles) {
    std::vector<double> err;
    for (const auto& e : evals) err.push_back(oracle_error(model, oracle, name, e));
    out.push_back(make_check("oracle-" + name, model, points.size(), err, kOracleTolerance));
  }
  return out;
}

std::vector<PointwiseCheck> route_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                         Execution exec) {
  struct Errors {
    double bach_uv = 0.0, bach_d = 0.0, d_routes = 0.0, u_routes = 0.0;
  };
  const bool soliton = model.is_soliton && model.has_potential();
  const auto errs = map_nodes<Errors>(
      points.size(),
      [&](std::size_t i) {
        const PointEvaluation e = evaluate_point(model, points[i]);
        const GeometryCache& c = e.geo;
        Errors r;
        const Mat<double> bw = to_orthonormal(bach_weyl(c), c.g);
        r.bach_uv = max_diff(bw, to_orthonormal(bach_uv(c), c.g));
        if (soliton) {
          r.bach_d = max_diff(bw, to_orthonormal(bach_from_d(c, e.pot), c.g));
          r.d_routes = max_diff(to_orthonormal(d_tensor_conformal(c, e.pot), c.g),
                                to_orthonormal(d_tensor_soliton(c, e.pot), c.g));
          r.u_routes = max_diff(to_orthonormal(tensor_U_direct(c), c.g),
                                to_orthonormal(tensor_U_on_soliton(c, e.pot), c.g));
        }
        return r;
      },
      exec);
  std::vector<double> a, b, d, u;
  for (const auto& e : errs) {
    a.push_back(e.bach_uv);
    b.push_back(e.bach_d);
    d.push_back(e.d_routes);
    u.push_back(e.u_routes);
  }
  std::vector<PointwiseCheck> out = {make_check("route-bach-weyl-uv", model, points.size(), a, kRouteTolerance)};
  if (soliton) {
    out.push_back(make_check("route-bach-weyl-d", model, points.size(), b, kRouteTolerance));
    out.push_back(make_check("route-d-conformal-soliton", model, points.size(), d, kRouteTolerance));
    out.push_back(make_check("route-u-direct-soliton", model, points.size(), u, kRouteTolerance));
  }
  return out;
}

PointwiseCheck soliton_identity_check(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                      Execution exec) {
  const auto errs = map_nodes<double>(
      points.size(), [&](std::size_t i) { return soliton_residuals(model, points[i]).max(); }, exec);
  return make_check("soliton-identities", model, points.size(), errs, kOracleTolerance);
}

std::vector<PointwiseCheck> trace_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                         Execution exec) {
  const auto reps = map_nodes<TraceReport>(
      points.size(), [&](std::size_t i) { return traces(geometry_at(*model.metric, points[i])); }, exec);
  std::vector<double> u, v, b;
  double lap = 0.0;
  for (const auto& t : reps) {
    u.push_back(std::abs(t.trU + t.laplacian_R));
    v.push_back(std::abs(t.trV - 3.0 * t.laplacian_R));
    b.push_back(std::abs(t.trB));
    lap = std::max(lap, std::abs(t.laplacian_R));
  }
  std::vector<PointwiseCheck> out = {make_check("trace-U", model, points.size(), u, kTraceTolerance),
                                     make_check("trace-V", model, points.size(), v, kTraceTolerance),
                                     make_check("trace-B", model, points.size(), b, kTraceTolerance)};
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |Delta R| over the sample = %.6g", lap);
  for (auto& c : out) c.note = buf;
  return out;
}

std::vector<PointwiseCheck> divergence_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                              Execution exec) {
  const auto reps = map_nodes<DivergenceReport>(
      points.size(), [&](std::size_t i) { return divergences(*model.metric, points[i]); }, exec);
  std::vector<double> u, v;
  for (const auto& r : reps) {
    u.push_back(max_abs(r.div_U));
    v.push_back(max_abs(r.div_V));
  }
  return {make_check("divergence-U", model, points.size(), u, kDivergenceTolerance),
          make_check("divergence-V", model, points.size(), v, kDivergenceTolerance)};
}

std::vector<PointwiseCheck> pointwise_suite(const SolitonModel& model, int count, std::uint64_t seed,
                                            Execution exec) {
  const std::vector<ChartPoint> pts = sample_chart_points(model, count, seed);
  std::vector<PointwiseCheck> out = oracle_checks(model, pts, exec);
  const auto routes = route_checks(model, pts, exec);
  out.insert(out.end(), routes.begin(), routes.end());
  if (model.is_soliton) out.push_back(soliton_identity_check(model, pts, exec));
  const auto tr = trace_checks(model, pts, exec);
  out.insert(out.end(), tr.begin(), tr.end());
  const auto dv = divergence_checks(model, pts, exec);
  out.insert(out.end(), dv.begin(), dv.end());
  return out;
}

}  // namespace shrinker

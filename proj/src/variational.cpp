#include "shrinker/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

namespace shrinker {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMismatchFloor = 1e-12;

template <class S>
S mode_wave(const FourierMode& m, const std::array<S, kDim>& x) {
  using std::cos;
  using std::sin;
  S arg(0.0);
  for (int a = 0; a < kDim; ++a)
    if (m.k[a] != 0) arg += static_cast<double>(m.k[a]) * x[a];
  return m.phase == FourierMode::Phase::Cos ? cos(arg) : sin(arg);
}

// Canonical key of cos/sin(k.x): k and -k give the same function up to sign.
struct ModeKey {
  std::array<int, kDim> k;
  FourierMode::Phase phase;
  bool operator<(const ModeKey& o) const { return std::tie(k, phase) < std::tie(o.k, o.phase); }
};

// Mode amplitudes merged over equivalent wave functions.
std::vector<std::pair<ModeKey, Mat<double>>> merged_modes(const std::vector<FourierMode>& modes) {
  std::vector<std::pair<ModeKey, Mat<double>>> out;
  for (const auto& m : modes) {
    ModeKey key{m.k, m.phase};
    double sign = 1.0;
    const auto first = std::find_if(m.k.begin(), m.k.end(), [](int v) { return v != 0; });
    if (first != m.k.end() && *first < 0) {
      for (int& v : key.k) v = -v;
      if (m.phase == FourierMode::Phase::Sin) sign = -1.0;
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) {
      return !(e.first < key) && !(key < e.first);
    });
    if (it == out.end()) {
      out.push_back({key, sign * m.amplitude});
    } else {
      it->second += sign * m.amplitude;
    }
  }
  return out;
}

double frobenius2(const Mat<double>& a) {
  double s = 0.0;
  for (int i = 0; i < Mat<double>::size; ++i) s += a[i] * a[i];
  return s;
}

struct TorusGrid {
  std::vector<ChartPoint> points;
  std::vector<double> weights;  // rule weights only
};

TorusGrid torus_grid(const std::vector<int>& active, int n) {
  const Rule1D rule = periodic_trapezoid(n, 0.0, 2 * kPi);
  std::size_t total = 1;
  for (std::size_t i = 0; i < active.size(); ++i) total *= static_cast<std::size_t>(n);
  TorusGrid grid;
  grid.points.resize(total);
  grid.weights.assign(total, std::pow(2 * kPi, kDim - static_cast<int>(active.size())));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t q = active.size(); q-- > 0;) {
      const int idx = static_cast<int>(rest % n);
      rest /= n;
      grid.points[flat].coords[active[q]] = rule.nodes[idx];
      grid.weights[flat] *= rule.weights[idx];
    }
  }
  return grid;
}

std::vector<int> axes_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

void require_torus(const SolitonModel& m, const char* what) {
  if (m.name != "flat-torus" && m.name != "conformal-torus")
    throw InputError(std::string(what) + " needs a flat-torus or conformal-torus base, got '" + m.name + "'");
}

void require_resolution(const QuadratureSpec& quad) {
  if (quad.resolution < kMinResolution)
    throw InputError("quadrature resolution " + std::to_string(quad.resolution) + " is below the floor of " +
                     std::to_string(kMinResolution));
}

double richardson(const std::vector<double>& d, const std::vector<double>& steps) {
  if (d.size() == 2 && std::abs(steps[1] - 0.5 * steps[0]) < 1e-15 * steps[0])
    return (4.0 * d[1] - d[0]) / 3.0;
  return d.back();
}

// `noise` is the size of a difference quotient that round-off in F alone can produce.
double relative_mismatch(double a, double b, double noise = 0.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), kMismatchFloor, noise});
}

// 1e3 ulps of the largest functional value, divided by the smallest step to the order of the quotient.
double roundoff_scale(double f_scale, const std::vector<double>& steps, int order) {
  const double t = *std::min_element(steps.begin(), steps.end());
  return 1e3 * std::numeric_limits<double>::epsilon() * f_scale / std::pow(t, order);
}

bool positive_definite_on(const SymmetricField& metric, const TorusGrid& grid) {
  for (const auto& p : grid.points) {
    Mat<double> l;
    if (!cholesky(metric(p.coords), l)) return false;
  }
  return true;
}

}  // namespace

PerturbationField::PerturbationField(std::vector<FourierMode> modes) : modes_(std::move(modes)) {
  tt_ = true;
  for (const auto& m : modes_) {
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j)
        if (m.amplitude(i, j) != m.amplitude(j, i)) throw InputError("perturbation amplitude must be symmetric");
    double tr = 0.0;
    for (int i = 0; i < kDim; ++i) tr += m.amplitude(i, i);
    if (tr != 0.0) tt_ = false;
    for (int i = 0; i < kDim; ++i) {
      double ak = 0.0;
      for (int j = 0; j < kDim; ++j) ak += m.amplitude(i, j) * m.k[j];
      if (ak != 0.0) tt_ = false;
    }
  }
  const std::vector<FourierMode> copy = modes_;
  field_ = make_symmetric_field([copy](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    Mat<S> h;
    for (const auto& m : copy) {
      const S w = mode_wave(m, x);
      for (int i = 0; i < Mat<S>::size; ++i)
        if (m.amplitude[i] != 0.0) h[i] += m.amplitude[i] * w;
    }
    return h;
  });
}

std::vector<int> PerturbationField::active_axes() const {
  std::set<int> axes;
  for (const auto& m : modes_)
    for (int a = 0; a < kDim; ++a)
      if (m.k[a] != 0) axes.insert(a);
  return {axes.begin(), axes.end()};
}

double PerturbationField::flat_l2_mass() const {
  const double vol = std::pow(2 * kPi, 4);
  double s = 0.0;
  for (const auto& [key, a] : merged_modes(modes_)) {
    const bool zero = std::all_of(key.k.begin(), key.k.end(), [](int v) { return v == 0; });
    if (zero) {
      if (key.phase == FourierMode::Phase::Cos) s += frobenius2(a) * vol;
    } else {
      s += frobenius2(a) * vol / 2.0;
    }
  }
  return s;
}

double PerturbationField::flat_biharmonic_mass() const {
  const double vol = std::pow(2 * kPi, 4);
  double s = 0.0;
  for (const auto& [key, a] : merged_modes(modes_)) {
    double k2 = 0.0;
    for (int v : key.k) k2 += static_cast<double>(v) * v;
    if (k2 > 0.0) s += k2 * k2 * frobenius2(a) * vol / 2.0;
  }
  return s;
}

PerturbationField documented_tt_mode(double scale) {
  FourierMode m;
  m.k = {1, 0, 0, 0};
  m.amplitude(1, 1) = scale;
  m.amplitude(2, 2) = -scale;
  return PerturbationField({m});
}

PerturbationField random_perturbation(std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> freq(-2, 2);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<FourierMode> out;
  while (static_cast<int>(out.size()) < modes) {
    FourierMode m;
    m.k = {freq(rng), freq(rng), 0, 0};
    if (m.k[0] == 0 && m.k[1] == 0) continue;
    // the first mode is even under x -> -x and under the (pi, pi) shift, like the
    // conformal-torus gradient, so the pairing does not vanish by symmetry
    if (out.empty() && (m.k[0] + m.k[1]) % 2 != 0) continue;
    for (int i = 0; i < kDim; ++i)
      for (int j = i; j < kDim; ++j) {
        const double v = entry(rng) / 8.0;
        m.amplitude(i, j) = v;
        m.amplitude(j, i) = v;
      }
    m.phase = coin(rng) ? FourierMode::Phase::Sin : FourierMode::Phase::Cos;
    if (out.empty()) m.phase = FourierMode::Phase::Cos;
    out.push_back(m);
  }
  return PerturbationField(std::move(out));
}

Direction as_direction(const PerturbationField& h, const std::string& name) {
  return {name, h.field(), h.active_axes()};
}

Direction conformal_bump_direction(const SolitonModel& base, double b) {
  require_torus(base, "conformal bump direction");
  auto metric = base.metric;
  auto field = make_symmetric_field([metric, b](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::cos;
    using std::sin;
    const S bump = sin(x[0]) * sin(x[1]);
    const S psi = b * bump * bump;
    Mat<S> g = (*metric)(x);
    for (int i = 0; i < Mat<S>::size; ++i) g[i] = 2.0 * psi * g[i];
    return g;
  });
  return {"conformal-bump", field, {0, 1}};
}

double functional_combine(const ParameterPair& p, double W2, double R2) {
  return -p.alpha * W2 + 0.5 * (p.alpha / 3.0 - p.beta) * R2;
}

FunctionalValue functional_eval(const ParameterPair& p, const SolitonModel& model, const QuadratureSpec& quad) {
  if (model.integration == IntegrationKind::OrbitReduced)
    throw DomainError("model '" + model.name + "' is non-compact; the unweighted functional is undefined");
  if (model.integration == IntegrationKind::Homogeneous) {
    const GeometryCache c = geometry_at(*model.metric, model.base_point);
    FunctionalValue v;
    v.W2 = inner(c.weyl, c.weyl, c.ginv) * model.total_volume;
    v.R2 = c.scalar * c.scalar * model.total_volume;
    v.F = functional_combine(p, v.W2, v.R2);
    return v;
  }
  return functional_eval(p, *model.metric, model.active_axes, quad);
}

FunctionalValue functional_eval(const ParameterPair& p, const SymmetricField& metric,
                                const std::vector<int>& active_axes, const QuadratureSpec& quad) {
  require_resolution(quad);
  const TorusGrid grid = torus_grid(active_axes, quad.resolution);
  struct Pair {
    double w2 = 0.0, r2 = 0.0;
    bool ok = true;
  };
  const auto vals = map_nodes<Pair>(
      grid.points.size(),
      [&](std::size_t i) {
        const Mat<Jet<2>> g = metric.taylor<2>(grid.points[i]);
        Mat<double> gv = convert_tensor<double>(g), l;
        if (!cholesky(gv, l)) return Pair{0.0, 0.0, false};
        const JetGeometry<2> geo(g);
        const Mat<double> ginv = convert_tensor<double>(geo.ginv);
        const Tensor<double, 4> w = convert_tensor<double>(geo.weyl);
        const double R = geo.scalar.value();
        const double dv = std::sqrt(determinant(gv)) * grid.weights[i];
        return Pair{inner(w, w, ginv) * dv, R * R * dv, true};
      },
      quad.exec);
  std::vector<double> w2(vals.size()), r2(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!vals[i].ok) throw DomainError("metric is not positive definite on the torus grid");
    w2[i] = vals[i].w2;
    r2[i] = vals[i].r2;
  }
  FunctionalValue v;
  v.W2 = pairwise_sum(w2);
  v.R2 = pairwise_sum(r2);
  v.F = functional_combine(p, v.W2, v.R2);
  return v;
}

double gradient_pairing(const ParameterPair& p, const SymmetricField& metric, const Direction& h,
                        const std::vector<int>& active_axes, const QuadratureSpec& quad) {
  require_resolution(quad);
  const TorusGrid grid = torus_grid(active_axes, quad.resolution);
  const auto terms = map_nodes<double>(
      grid.points.size(),
      [&](std::size_t i) {
        const GeometryCache c = geometry_at(metric, grid.points[i]);
        const Mat<double> t = p.alpha * tensor_U_direct(c) + p.beta * tensor_V(c);
        return inner(t, (*h.field)(grid.points[i].coords), c.ginv) * c.volume_element * grid.weights[i];
      },
      quad.exec);
  return pairwise_sum(terms);
}

FiniteDifferenceReport first_variation_check(const ParameterPair& p, const SolitonModel& base, const Direction& h,
                                             const QuadratureSpec& quad, const std::vector<double>& steps) {
  require_torus(base, "first variation check");
  if (steps.empty()) throw InputError("first variation check needs at least one step");
  const std::vector<int> axes = axes_union(base.active_axes, h.active_axes);
  const TorusGrid grid = torus_grid(axes, quad.resolution);
  FiniteDifferenceReport rep;
  rep.functional = "F";
  rep.direction = h.name;
  rep.params = p;
  double f_scale = 0.0;
  for (double t : steps) {
    const auto plus = perturbed(base.metric, h.field, t);
    const auto minus = perturbed(base.metric, h.field, -t);
    if (!positive_definite_on(*plus, grid) || !positive_definite_on(*minus, grid)) {
      rep.rejected_steps.push_back(t);
      continue;
    }
    const double fp = functional_eval(p, *plus, axes, quad).F;
    const double fm = functional_eval(p, *minus, axes, quad).F;
    f_scale = std::max({f_scale, std::abs(fp), std::abs(fm)});
    rep.steps.push_back(t);
    rep.differences.push_back((fp - fm) / (2.0 * t));
  }
  if (rep.steps.empty()) throw DomainError("g + t h loses positive definiteness at every requested step");
  rep.extrapolated = richardson(rep.differences, rep.steps);
  rep.predicted = gradient_pairing(p, *base.metric, h, axes, quad);
  rep.mismatch = relative_mismatch(rep.extrapolated, rep.predicted, roundoff_scale(f_scale, rep.steps, 1));
  rep.pass = rep.mismatch <= rep.tolerance;
  rep.note = "predicted value is int <alpha U + beta V, h> dV_g";
  return rep;
}

SecondVariationR2 second_variation_R2(const SolitonModel& model, const PerturbationField& h,
                                      const QuadratureSpec& quad) {
  require_torus(model, "second variation of int R^2");
  if (!h.is_tt()) throw InputError("second variation of int R^2 needs a TT perturbation");
  require_resolution(quad);
  const std::vector<int> axes = axes_union(model.active_axes, h.active_axes());
  const TorusGrid grid = torus_grid(axes, quad.resolution);
  const auto hf = h.field();
  const auto terms = map_nodes<double>(
      grid.points.size(),
      [&](std::size_t n) {
        const ChartPoint& pt = grid.points[n];
        const GeometryCache c = geometry_at(*model.metric, pt);
        const Mat<Jet<2>> hj = hf->taylor<2>(pt);
        const Mat<double> hv = convert_tensor<double>(hj);
        const auto dh = covariant_derivatives(hj, 2, c, 1).first;
        const Mat<double> hu = raise_both(hv, c.ginv);
        double rm = 0.0, rc = 0.0;
        for (int i = 0; i < kDim; ++i)
          for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k)
              for (int l = 0; l < kDim; ++l) rm += c.riemann(i, k, j, l) * hu(i, j) * hu(k, l);
        // R_ik h^ij h^k_j
        for (int i = 0; i < kDim; ++i)
          for (int k = 0; k < kDim; ++k) {
            double s = 0.0;
            for (int j = 0; j < kDim; ++j)
              for (int b = 0; b < kDim; ++b) s += hu(i, j) * c.ginv(k, b) * hv(b, j);
            rc += c.ricci(i, k) * s;
          }
        const double R = c.scalar;
        const double rc_h = inner(c.ricci, hv, c.ginv);
        const double integrand = -R * norm_squared(dh, c.ginv) - 2.0 * R * rm + 2.0 * R * rc +
                                 2.0 * rc_h * rc_h + (0.5 * R * R - 2.0 * c.lap_scalar) * norm_squared(hv, c.ginv);
        return integrand * c.volume_element * grid.weights[n];
      },
      quad.exec);
  SecondVariationR2 out;
  out.form = pairwise_sum(terms);
  if (model.name == "flat-torus") {
    const ParameterPair r2_only{0.0, -2.0};  // F_{0,-2} = int R^2
    std::vector<double> diffs, used;
    for (double t : kDefaultSteps) {
      const double fp = functional_eval(r2_only, *perturbed(model.metric, hf, t), axes, quad).F;
      const double f0 = functional_eval(r2_only, *model.metric, axes, quad).F;
      const double fm = functional_eval(r2_only, *perturbed(model.metric, hf, -t), axes, quad).F;
      diffs.push_back((fp - 2.0 * f0 + fm) / (t * t));
      used.push_back(t);
    }
    out.fd = richardson(diffs, used);
    out.note = "flat background: form and finite difference both vanish to leading order";
  } else {
    out.note = "curved background: quadratic form only, no independent oracle";
  }
  return out;
}

FiniteDifferenceReport flat_second_variation_check(double alpha, const PerturbationField& h,
                                                   const QuadratureSpec& quad, double beta,
                                                   const std::vector<double>& steps) {
  if (!h.is_tt()) throw InputError("flat second variation check needs a TT perturbation");
  if (steps.empty()) throw InputError("flat second variation check needs at least one step");
  const SolitonModel flat = catalog_model("flat-torus");
  const std::vector<int> axes = h.active_axes();
  const ParameterPair p{alpha, beta};
  FiniteDifferenceReport rep;
  rep.functional = "F";
  rep.direction = "fourier";
  rep.params = p;
  const double f0 = functional_eval(p, *flat.metric, axes, quad).F;
  const TorusGrid grid = torus_grid(axes, quad.resolution);
  double f_scale = std::abs(f0);
  for (double t : steps) {
    const auto plus = perturbed(flat.metric, h.field(), t);
    const auto minus = perturbed(flat.metric, h.field(), -t);
    if (!positive_definite_on(*plus, grid) || !positive_definite_on(*minus, grid)) {
      rep.rejected_steps.push_back(t);
      continue;
    }
    const double fp = functional_eval(p, *plus, axes, quad).F;
    const double fm = functional_eval(p, *minus, axes, quad).F;
    f_scale = std::max({f_scale, std::abs(fp), std::abs(fm)});
    rep.steps.push_back(t);
    rep.differences.push_back((fp - 2.0 * f0 + fm) / (t * t));
  }
  if (rep.steps.empty()) throw DomainError("g + t h loses positive definiteness at every requested step");
  rep.extrapolated = richardson(rep.differences, rep.steps);
  rep.predicted = alpha * h.flat_biharmonic_mass();
  const double noise = roundoff_scale(f_scale, rep.steps, 2);
  rep.mismatch = relative_mismatch(rep.extrapolated, rep.predicted, noise);
  rep.pass = rep.mismatch <= rep.tolerance;
  const double flipped = relative_mismatch(rep.extrapolated, -rep.predicted, noise);
  char buf[160];
  std::snprintf(buf, sizeof buf, "predicted value is alpha int |Delta h|^2; mismatch against its negative is %.3g",
                flipped);
  rep.note = buf;
  return rep;
}

WeylGradientReport weyl_gradient_diagnostic(const QuadratureSpec& quad) {
  // surface of varying curvature times a flat factor: B != 0
  const auto metric = make_symmetric_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::exp;
    using std::sin;
    Mat<S> g = identity_matrix<S>();
    g(1, 1) = exp(0.6 * sin(x[0]));
    return g;
  });
  // modes chosen to break the reflection x0 -> pi - x0 of the metric
  FourierMode m1, m2;
  m1.k = {1, 0, 0, 0};
  m1.phase = FourierMode::Phase::Sin;
  m2.k = {2, 0, 0, 0};
  const double a1[4][4] = {{0.25, 0, 0.125, 0}, {0, 0.5, 0, -0.25}, {0.125, 0, -0.375, 0}, {0, -0.25, 0, 0.125}};
  const double a2[4][4] = {{0, 0.25, 0, 0}, {0.25, -0.125, 0, 0}, {0, 0, 0.25, 0.125}, {0, 0, 0.125, 0.5}};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      m1.amplitude(i, j) = a1[i][j];
      m2.amplitude(i, j) = a2[i][j];
    }
  const PerturbationField h({m1, m2});
  const Direction dir = as_direction(h);
  const std::vector<int> axes = {0};
  const ParameterPair w2_only{-1.0, -1.0 / 3.0};  // F = int |W|^2
  std::vector<double> diffs;
  for (double t : kDefaultSteps) {
    const double fp = functional_eval(w2_only, *perturbed(metric, dir.field, t), axes, quad).W2;
    const double fm = functional_eval(w2_only, *perturbed(metric, dir.field, -t), axes, quad).W2;
    diffs.push_back((fp - fm) / (2.0 * t));
  }
  WeylGradientReport rep;
  rep.fd = richardson(diffs, kDefaultSteps);
  // B = U/2 + V/6
  rep.bach_pairing = gradient_pairing({0.5, 1.0 / 6.0}, *metric, dir, axes, quad);
  rep.ratio = rep.fd / rep.bach_pairing;
  return rep;
}

std::vector<double> SpectralPolynomial::roots() const {
  if (a2 == 0.0) {
    if (a1 == 0.0) return {};
    return {-a0 / a1};
  }
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  // numerically stable pair
  const double q = -0.5 * (a1 + std::copysign(sq, a1));
  std::vector<double> r;
  if (q != 0.0) {
    r = {q / a2, a0 / q};
  } else {
    r = {0.0, 0.0};
  }
  std::sort(r.begin(), r.end());
  return r;
}

SpectralPolynomial spectral_polynomial(double alpha, double beta, double R) {
  SpectralPolynomial p;
  p.alpha = alpha;
  p.beta = beta;
  p.R = R;
  p.a2 = alpha;
  // same coefficients as R (beta - 4 alpha / 3) / 2 and R^2 (5 alpha / 36 - beta / 4), grouped so
  // that rational inputs such as beta = 1/3 round as little as possible
  p.a1 = R * (3.0 * beta - 4.0 * alpha) / 6.0;
  p.a0 = R * R * (5.0 * alpha - 9.0 * beta) / 36.0;
  return p;
}

SpectralConsistency spectral_consistency(double alpha, double beta, double R) {
  // d^2 F = 2 alpha <B'h, h> + (beta - alpha/3) <V'h, h>
  SpectralConsistency s;
  s.printed_a0 = spectral_polynomial(alpha, beta, R).a0;
  const double bach_a0 = alpha * R * R / 18.0;
  s.a0_displayed_vprime = bach_a0;
  s.a0_full_vprime = bach_a0 - (beta - alpha / 3.0) * R * R / 4.0;
  s.a1_composed = -0.5 * alpha * R + 0.5 * (beta - alpha / 3.0) * R;
  s.discrepancy = s.printed_a0 - s.a0_displayed_vprime;
  return s;
}

StabilityVerdict stability_verdict(const SpectralPolynomial& p, double mu0) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  StabilityVerdict v;
  v.mu0 = mu0;
  if (p.a2 > 0.0) {
    v.argmin = std::max(mu0, -p.a1 / (2.0 * p.a2));
    v.infimum = p(v.argmin);
  } else if (p.a2 < 0.0) {
    v.argmin = inf;
    v.infimum = -inf;
  } else if (p.a1 > 0.0) {
    v.argmin = mu0;
    v.infimum = p(mu0);
  } else if (p.a1 < 0.0) {
    v.argmin = inf;
    v.infimum = -inf;
  } else {
    v.argmin = mu0;
    v.infimum = p.a0;
  }
  v.positive = v.infimum > 0.0;
  return v;
}

std::vector<StabilityEntry> stability_scan(double mu0, double R, const std::vector<ParameterPair>& grid,
                                           Execution exec) {
  return map_nodes<StabilityEntry>(
      grid.size(),
      [&](std::size_t i) {
        return StabilityEntry{grid[i], R, stability_verdict(spectral_polynomial(grid[i].alpha, grid[i].beta, R), mu0)};
      },
      exec);
}

}  // namespace shrinker

#include "shrinker/catalog.hpp"

#include <algorithm>
#include <numbers>

namespace shrinker {

namespace {

constexpr double kPi = std::numbers::pi;

template <class S>
using Coords = std::array<S, kDim>;

Mat<double> diag(double a, double b, double c, double d) {
  Mat<double> m;
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

ExactOracle frame(const Mat<double>& m) {
  ExactOracle o;
  o.kind = ExactOracle::Kind::FrameMatrix;
  o.matrix = m;
  return o;
}

ExactOracle scalar(double v) {
  ExactOracle o;
  o.kind = ExactOracle::Kind::Scalar;
  o.scalar = v;
  return o;
}

ExactOracle grad_f_multiple(double k) {
  ExactOracle o;
  o.kind = ExactOracle::Kind::GradFSquaredMultiple;
  o.scalar = k;
  return o;
}

void zero_oracles(SolitonModel& m) {
  for (const char* t : {"U", "V", "B"}) m.oracles[t] = frame(Mat<double>());
  m.oracles["D2"] = scalar(0.0);
  m.oracles["R"] = scalar(0.0);
  m.oracles["Rc"] = frame(Mat<double>());
}

SolitonModel gaussian() {
  SolitonModel m;
  m.name = "gaussian";
  m.description = "flat R^4 with f = |x|^2/4";
  m.metric = make_symmetric_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    return identity_matrix<S>();
  });
  m.potential = make_scalar_field([](const auto& x) {
    return 0.25 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  });
  m.is_soliton = true;
  m.chart_lo = {-3, -3, -3, -3};
  m.chart_hi = {3, 3, 3, 3};
  m.integration = IntegrationKind::OrbitReduced;
  m.min_f = 0.0;
  m.flat_dim = 4;
  m.flat_axes = {0, 1, 2, 3};
  m.factor_volume = 1.0;
  zero_oracles(m);
  return m;
}

SolitonModel sphere4() {
  SolitonModel m;
  m.name = "sphere4";
  m.description = "round S^4 of radius sqrt(6) in a stereographic chart, f = 2";
  m.metric = make_symmetric_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    const S r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const S q = 6.0 + r2;
    const S conf = 144.0 / (q * q);
    Mat<S> g;
    for (int i = 0; i < kDim; ++i) g(i, i) = conf;
    return g;
  });
  m.potential = make_scalar_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    return S(2.0);
  });
  m.is_soliton = true;
  m.chart_lo = {-2, -2, -2, -2};
  m.chart_hi = {2, 2, 2, 2};
  m.integration = IntegrationKind::Homogeneous;
  m.min_f = 2.0;
  m.total_volume = 8.0 * kPi * kPi / 3.0 * 36.0;
  zero_oracles(m);
  m.oracles["R"] = scalar(2.0);
  m.oracles["Rc"] = frame(diag(0.5, 0.5, 0.5, 0.5));
  return m;
}

SolitonModel cyl_s3xr() {
  SolitonModel m;
  m.name = "cyl-s3xr";
  m.description = "S^3(2) x R in hyperspherical coordinates (chi, theta, phi, x), f = 3/2 + x^2/4";
  m.metric = make_symmetric_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::sin;
    const S s1 = sin(x[0]);
    const S s2 = sin(x[1]);
    Mat<S> g;
    g(0, 0) = S(4.0);
    g(1, 1) = 4.0 * s1 * s1;
    g(2, 2) = 4.0 * s1 * s1 * s2 * s2;
    g(3, 3) = S(1.0);
    return g;
  });
  m.potential = make_scalar_field([](const auto& x) { return 1.5 + 0.25 * x[3] * x[3]; });
  m.is_soliton = true;
  m.chart_lo = {0.2, 0.2, 0.0, -3.0};
  m.chart_hi = {kPi - 0.2, kPi - 0.2, 2 * kPi, 3.0};
  m.integration = IntegrationKind::OrbitReduced;
  m.min_f = 1.5;
  m.flat_dim = 1;
  m.flat_axes = {3};
  m.factor_volume = 16.0 * kPi * kPi;
  m.base_point = ChartPoint{{kPi / 2, kPi / 2, 0.0, 0.0}};
  m.oracles["U"] = frame(diag(-1.0 / 16, -1.0 / 16, -1.0 / 16, 3.0 / 16));
  m.oracles["V"] = frame(diag(3.0 / 16, 3.0 / 16, 3.0 / 16, -9.0 / 16));
  m.oracles["B"] = frame(Mat<double>());
  m.oracles["D2"] = scalar(0.0);
  m.oracles["R"] = scalar(1.5);
  m.oracles["Rc"] = frame(diag(0.5, 0.5, 0.5, 0.0));
  return m;
}

SolitonModel cyl_s2xr2() {
  SolitonModel m;
  m.name = "cyl-s2xr2";
  m.description = "S^2(sqrt 2) x R^2 in coordinates (theta, phi, y1, y2), f = 1 + |y|^2/4";
  m.metric = make_symmetric_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::sin;
    const S s1 = sin(x[0]);
    Mat<S> g;
    g(0, 0) = S(2.0);
    g(1, 1) = 2.0 * s1 * s1;
    g(2, 2) = S(1.0);
    g(3, 3) = S(1.0);
    return g;
  });
  m.potential = make_scalar_field([](const auto& x) { return 1.0 + 0.25 * (x[2] * x[2] + x[3] * x[3]); });
  m.is_soliton = true;
  m.chart_lo = {0.2, 0.0, -3.0, -3.0};
  m.chart_hi = {kPi - 0.2, 2 * kPi, 3.0, 3.0};
  m.integration = IntegrationKind::OrbitReduced;
  m.min_f = 1.0;
  m.flat_dim = 2;
  m.flat_axes = {2, 3};
  m.factor_volume = 8.0 * kPi;
  m.base_point = ChartPoint{{kPi / 2, 0.0, 0.0, 0.0}};
  m.oracles["U"] = frame(Mat<double>());
  m.oracles["V"] = frame(diag(0.25, 0.25, -0.25, -0.25));
  m.oracles["B"] = frame(diag(1.0 / 24, 1.0 / 24, -1.0 / 24, -1.0 / 24));
  m.oracles["D2"] = grad_f_multiple(1.0 / 12);
  m.oracles["R"] = scalar(1.0);
  m.oracles["Rc"] = frame(diag(0.5, 0.5, 0.0, 0.0));
  return m;
}

SolitonModel conformal_torus(double a) {
  SolitonModel m;
  m.name = "conformal-torus";
  m.description = "T^4 with g = exp(2 a sin x1 sin x2) delta (not a soliton)";
  m.params.amplitude = a;
  m.metric = make_symmetric_field([a](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    using std::exp;
    using std::sin;
    const S conf = exp(2.0 * a * sin(x[0]) * sin(x[1]));
    Mat<S> g;
    for (int i = 0; i < kDim; ++i) g(i, i) = conf;
    return g;
  });
  m.is_soliton = false;
  m.chart_lo = {0, 0, 0, 0};
  m.chart_hi = {2 * kPi, 2 * kPi, 2 * kPi, 2 * kPi};
  m.integration = IntegrationKind::Periodic;
  m.total_volume = std::pow(2 * kPi, 4);
  m.active_axes = {0, 1};
  return m;
}

SolitonModel flat_torus() {
  SolitonModel m;
  m.name = "flat-torus";
  m.description = "flat T^4 of side 2 pi (not a soliton)";
  m.metric = make_symmetric_field([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    return identity_matrix<S>();
  });
  m.is_soliton = false;
  m.chart_lo = {0, 0, 0, 0};
  m.chart_hi = {2 * kPi, 2 * kPi, 2 * kPi, 2 * kPi};
  m.integration = IntegrationKind::Periodic;
  m.total_volume = std::pow(2 * kPi, 4);
  return m;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"gaussian",        "sphere4",   "cyl-s3xr",
                                                 "cyl-s2xr2",       "conformal-torus", "flat-torus"};
  return names;
}

bool is_catalog_name(const std::string& name) {
  const auto& n = catalog_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SolitonModel catalog_model(const std::string& name, const ModelParams& params) {
  if (name == "gaussian") return gaussian();
  if (name == "sphere4") return sphere4();
  if (name == "cyl-s3xr") return cyl_s3xr();
  if (name == "cyl-s2xr2") return cyl_s2xr2();
  if (name == "conformal-torus") {
    if (!(std::abs(params.amplitude) < 1.0)) throw InputError("conformal-torus amplitude must satisfy |a| < 1");
    return conformal_torus(params.amplitude);
  }
  if (name == "flat-torus") return flat_torus();
  throw InputError("unknown model '" + name + "'");
}

PointEvaluation evaluate_point(const SolitonModel& model, const ChartPoint& p) {
  const JetGeometry<4> geo(model.metric->taylor<4>(p));
  PointEvaluation out;
  out.geo = extract_fields<double>(geo);
  if (model.potential) {
    out.pot = potential_fields<double>(geo, model.potential->taylor<4>(p));
    out.has_potential = true;
  }
  return out;
}

ChartPoint random_point(const SolitonModel& model, std::mt19937_64& rng) {
  ChartPoint p;
  for (int a = 0; a < kDim; ++a) {
    std::uniform_real_distribution<double> u(model.chart_lo[a], model.chart_hi[a]);
    p.coords[a] = u(rng);
  }
  return p;
}

ChartPoint orbit_point(const SolitonModel& model, double s) {
  ChartPoint p = model.base_point;
  for (int a : model.flat_axes) p.coords[a] = 0.0;
  if (!model.flat_axes.empty()) p.coords[model.flat_axes.front()] = s;
  return p;
}

double ResidualReport::max() const {
  return std::max({soliton_equation, normalization, identity_a, identity_b, identity_c, bochner});
}

ResidualReport soliton_residuals(const SolitonModel& model, const ChartPoint& p) {
  if (!model.is_soliton || !model.potential)
    throw NotASolitonError("soliton residuals requested for test metric '" + model.name + "'");
  const PointEvaluation e = evaluate_point(model, p);
  const GeometryCache& c = e.geo;
  const PotentialJet<double>& f = e.pot;
  const Vec<double> df_up = raise(f.df, c.ginv);
  ResidualReport r;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      r.soliton_equation =
          std::max(r.soliton_equation, std::abs(c.ricci(i, j) + f.ddf(i, j) - model.rho * c.g(i, j)));
  const double grad_f2 = inner(f.df, f.df, c.ginv);
  r.normalization = std::abs(c.scalar + grad_f2 - f.f);
  for (int i = 0; i < kDim; ++i) {
    double rc_df = 0.0, hess_df = 0.0;
    for (int j = 0; j < kDim; ++j) {
      rc_df += c.ricci(i, j) * df_up(j);
      hess_df += f.ddf(i, j) * df_up(j);
    }
    r.identity_a = std::max(r.identity_a, std::abs(rc_df - 0.5 * c.d_scalar(i)));
    r.identity_c = std::max(r.identity_c, std::abs(hess_df - 0.5 * f.df(i) + 0.5 * c.d_scalar(i)));
  }
  r.identity_b = std::abs(f.lap - (2.0 - c.scalar));
  r.bochner = std::abs(c.lap_scalar - inner(c.d_scalar, f.df, c.ginv) - c.scalar +
                       2.0 * inner(c.ricci, c.ricci, c.ginv));
  return r;
}

const ExactOracle& exact_oracle(const SolitonModel& model, const std::string& tensor) {
  const auto it = model.oracles.find(tensor);
  if (it == model.oracles.end())
    throw InputError("no exact oracle for tensor '" + tensor + "' on model '" + model.name + "'");
  return it->second;
}

}  // namespace shrinker

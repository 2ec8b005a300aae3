#pragma once

// Pointwise Riemannian geometry on one coordinate chart of a 4-manifold.
//
// Conventions (all tensors all-covariant, indices raised on demand):
//   Christoffel(k,i,j)   = Gamma^k_ij
//   R^a_bcd              = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
//   R_abcd               = g_ae R^e_bcd      (round spheres have R_abab > 0)
//   R_bd                 = g^ac R_abcd
//   (nabla T)(a..., m)   = nabla_m T(a...)   (derivative index appended last)
//   (nabla^2 T)(..., m, n) = nabla_n nabla_m T(...)
//   Delta u              = g^ij nabla_i nabla_j u

#include <array>
#include <memory>
#include <utility>

#include "shrinker/errors.hpp"
#include "shrinker/jet.hpp"
#include "shrinker/tensor.hpp"

namespace shrinker {

struct ChartPoint {
  std::array<double, kDim> coords{};
};

template <int D>
using JetOrZero = Jet<(D > 0 ? D : 0)>;

// Levi-Civita covariant derivative of a jet-valued covariant tensor field.
// Loses one jet degree; Gamma must be known at least to the output degree.
template <int D, int DG, int R>
Tensor<Jet<D - 1>, R + 1> covariant_derivative(const Tensor<Jet<D>, R>& t,
                                               const Tensor<Jet<DG>, 3>& gamma) {
  static_assert(D >= 1, "covariant derivative needs a jet of degree >= 1");
  static_assert(DG >= D - 1, "Christoffel jets too short");
  using Out = Jet<D - 1>;
  const Tensor<Out, R> low = convert_tensor<Out>(t);
  const Tensor<Out, 3> gm = convert_tensor<Out>(gamma);
  Tensor<Out, R + 1> out;
  for (int f = 0; f < Tensor<Jet<D>, R>::size; ++f) {
    const auto idx = Tensor<Jet<D>, R>::unflatten(f);
    for (int m = 0; m < kDim; ++m) {
      Out v = partial(t[f], m);
      int stride = Tensor<Jet<D>, R>::size;
      for (int s = 0; s < R; ++s) {
        stride /= kDim;
        const int a = idx[s];
        for (int p = 0; p < kDim; ++p) v -= gm(p, m, a) * low[f + (p - a) * stride];
      }
      out[f * kDim + m] = v;
    }
  }
  return out;
}

// Weyl tensor from Riemann, Schouten and the metric (dimension 4).
template <class T>
Tensor<T, 4> weyl_from(const Tensor<T, 4>& riemann, const Mat<T>& schouten, const Mat<T>& g) {
  Tensor<T, 4> w;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k)
        for (int l = 0; l < kDim; ++l)
          w(i, j, k, l) = riemann(i, j, k, l) - (g(i, k) * schouten(j, l) + g(j, l) * schouten(i, k) -
                                                 g(i, l) * schouten(j, k) - g(j, k) * schouten(i, l));
  return w;
}

// All curvature of a metric given as a degree-N Taylor jet.  Curvature is
// known to degree N-2, first covariant derivatives to N-3, second to N-4.
template <int N>
class JetGeometry {
 public:
  static constexpr int kCurv = N - 2;
  static constexpr int kFirst = N - 3;
  static constexpr int kSecond = N - 4;
  using JC = Jet<kCurv>;
  using J1 = JetOrZero<kFirst>;
  using J2 = JetOrZero<kSecond>;

  explicit JetGeometry(const Mat<Jet<N>>& metric) : g(metric), ginv(inverse_spd(metric)) {
    static_assert(N >= 2, "curvature needs two metric derivatives");
    build_christoffel();
    build_curvature();
    if constexpr (N >= 3) {
      d_riemann = covariant_derivative(riemann, gamma);
      d_ricci = covariant_derivative(ricci, gamma);
      d_weyl = covariant_derivative(weyl, gamma);
      for (int m = 0; m < kDim; ++m) d_scalar(m) = partial(scalar, m);
    }
    if constexpr (N >= 4) {
      dd_riemann = covariant_derivative(d_riemann, gamma);
      dd_ricci = covariant_derivative(d_ricci, gamma);
      dd_weyl = covariant_derivative(d_weyl, gamma);
      dd_scalar = covariant_derivative(d_scalar, gamma);
    }
  }

  Mat<Jet<N>> g, ginv;
  Tensor<Jet<N - 1>, 3> gamma;
  Tensor<JC, 4> riemann, weyl;
  Mat<JC> ricci, schouten, g_c, ginv_c;
  JC scalar;
  Tensor<J1, 5> d_riemann, d_weyl;
  Tensor<J1, 3> d_ricci;
  Vec<J1> d_scalar;
  Tensor<J2, 6> dd_riemann, dd_weyl;
  Tensor<J2, 4> dd_ricci;
  Mat<J2> dd_scalar;

 private:
  void build_christoffel() {
    using JG = Jet<N - 1>;
    Tensor<JG, 3> dg;  // dg(i,j,l) = d_l g_ij
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j)
        for (int l = 0; l < kDim; ++l) dg(i, j, l) = partial(g(i, j), l);
    const Mat<JG> gi = convert_tensor<JG>(ginv);
    for (int k = 0; k < kDim; ++k)
      for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) {
          JG s(0.0);
          for (int l = 0; l < kDim; ++l) s += gi(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
          s *= 0.5;
          gamma(k, i, j) = s;
          gamma(k, j, i) = s;
        }
  }

  void build_curvature() {
    const Tensor<JC, 3> gm = convert_tensor<JC>(gamma);
    g_c = convert_tensor<JC>(g);
    ginv_c = convert_tensor<JC>(ginv);
    Tensor<JC, 4> up;
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b)
        for (int c = 0; c < kDim; ++c)
          for (int d = c + 1; d < kDim; ++d) {
            JC v = partial(gamma(a, d, b), c) - partial(gamma(a, c, b), d);
            for (int e = 0; e < kDim; ++e) v += gm(a, c, e) * gm(e, d, b) - gm(a, d, e) * gm(e, c, b);
            up(a, b, c, d) = v;
            up(a, b, d, c) = -v;
          }
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b)
        for (int c = 0; c < kDim; ++c)
          for (int d = 0; d < kDim; ++d) {
            JC s(0.0);
            for (int e = 0; e < kDim; ++e) s += g_c(a, e) * up(e, b, c, d);
            riemann(a, b, c, d) = s;
          }
    for (int b = 0; b < kDim; ++b)
      for (int d = 0; d < kDim; ++d) {
        JC s(0.0);
        for (int a = 0; a < kDim; ++a) s += up(a, b, a, d);
        ricci(b, d) = s;
      }
    scalar = trace(ricci, ginv_c);
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) schouten(i, j) = 0.5 * (ricci(i, j) - scalar / 6.0 * g_c(i, j));
    weyl = weyl_from(riemann, schouten, g_c);
  }
};

// Curvature fields at a point, at scalar type T (double, or a jet for
// quantities that must be differentiated once more, such as div U).
template <class T>
struct GeometryFields {
  Mat<T> g, ginv;
  double volume_element = 0.0;  // sqrt(det g) at the point
  Tensor<T, 3> christoffel;
  Tensor<T, 4> d_christoffel;  // (k,i,j,m) = d_m Gamma^k_ij
  Tensor<T, 5> dd_christoffel;  // (k,i,j,m,n) = d_n d_m Gamma^k_ij
  Tensor<T, 4> riemann;
  Tensor<T, 5> d_riemann;
  Tensor<T, 6> dd_riemann;
  Mat<T> ricci;
  Tensor<T, 3> d_ricci;
  Mat<T> lap_ricci;
  T scalar{};
  Vec<T> d_scalar;
  Mat<T> dd_scalar;
  T lap_scalar{};
  Mat<T> schouten;
  Tensor<T, 4> weyl;
  Tensor<T, 5> d_weyl;
  Tensor<T, 6> dd_weyl;
};

using GeometryCache = GeometryFields<double>;

template <class T, int D>
T jet_as(const Jet<D>& x) {
  if constexpr (std::is_same_v<T, double>) {
    return x.value();
  } else {
    return truncate<T::degree>(x);
  }
}

template <class T, int N>
GeometryFields<T> extract_fields(const JetGeometry<N>& geo) {
  static_assert(N - 4 >= jet_degree<T>::value, "metric jet too short for requested field degree");
  GeometryFields<T> out;
  out.g = convert_tensor<T>(geo.g);
  out.ginv = convert_tensor<T>(geo.ginv);
  {
    Mat<double> gv = convert_tensor<double>(geo.g);
    out.volume_element = std::sqrt(determinant(gv));
  }
  out.christoffel = convert_tensor<T>(geo.gamma);
  for (int f = 0; f < Tensor<T, 3>::size; ++f) {
    for (int m = 0; m < kDim; ++m) {
      const auto dm = partial(geo.gamma[f], m);
      out.d_christoffel[f * kDim + m] = jet_as<T>(dm);
      for (int n = 0; n < kDim; ++n) out.dd_christoffel[(f * kDim + m) * kDim + n] = jet_as<T>(partial(dm, n));
    }
  }
  out.riemann = convert_tensor<T>(geo.riemann);
  out.d_riemann = convert_tensor<T>(geo.d_riemann);
  out.dd_riemann = convert_tensor<T>(geo.dd_riemann);
  out.ricci = convert_tensor<T>(geo.ricci);
  out.d_ricci = convert_tensor<T>(geo.d_ricci);
  const auto dd_ricci = convert_tensor<T>(geo.dd_ricci);
  out.scalar = jet_as<T>(geo.scalar);
  out.d_scalar = convert_tensor<T>(geo.d_scalar);
  out.dd_scalar = convert_tensor<T>(geo.dd_scalar);
  out.schouten = convert_tensor<T>(geo.schouten);
  out.weyl = convert_tensor<T>(geo.weyl);
  out.d_weyl = convert_tensor<T>(geo.d_weyl);
  out.dd_weyl = convert_tensor<T>(geo.dd_weyl);
  out.lap_scalar = trace(out.dd_scalar, out.ginv);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      T s(0.0);
      for (int m = 0; m < kDim; ++m)
        for (int n = 0; n < kDim; ++n) s += out.ginv(m, n) * dd_ricci(i, j, m, n);
      out.lap_ricci(i, j) = s;
    }
  return out;
}

// Potential function data.  dddf(i,j,k) = nabla_k nabla_j nabla_i f.
template <class T>
struct PotentialJet {
  T f{};
  Vec<T> df;
  Mat<T> ddf;
  Tensor<T, 3> dddf;
  T lap{};
};

template <class T, int N>
PotentialJet<T> potential_fields(const JetGeometry<N>& geo, const Jet<N>& f) {
  static_assert(N - 3 >= jet_degree<T>::value, "potential jet too short");
  Vec<Jet<N - 1>> df;
  for (int m = 0; m < kDim; ++m) df(m) = partial(f, m);
  const auto ddf = covariant_derivative(df, geo.gamma);
  const auto dddf = covariant_derivative(ddf, geo.gamma);
  PotentialJet<T> out;
  out.f = jet_as<T>(f);
  out.df = convert_tensor<T>(df);
  out.ddf = convert_tensor<T>(ddf);
  out.dddf = convert_tensor<T>(dddf);
  out.lap = trace(out.ddf, convert_tensor<T>(geo.ginv));
  return out;
}

// Metric components with plain partial derivatives to order 4 at a point.
// dg(i,j,k) = d_k g_ij, d2g(i,j,k,l) = d_k d_l g_ij, and so on.
struct MetricJet {
  int order = 4;
  Mat<double> g;
  Tensor<double, 3> dg;
  Tensor<double, 4> d2g;
  Tensor<double, 5> d3g;
  Tensor<double, 6> d4g;
};

MetricJet metric_jet_from(const Mat<Jet<4>>& g);
Mat<Jet<4>> metric_taylor(const MetricJet& jet);
// Throws InputError on non-symmetric or non-positive-definite data.
void validate_metric_jet(const MetricJet& jet);
// Throws JetOrderError when jet.order < 4.
GeometryCache geometry_cache(const MetricJet& jet);

// Christoffel symbols of the cache as degree-1 jets.
Tensor<Jet<1>, 3> christoffel_jet(const GeometryCache& cache);

template <int R>
struct CovariantDerivatives {
  int order = 0;
  Tensor<double, R + 1> first;
  Tensor<double, R + 2> second;  // zero when order == 1
};

// nabla T and nabla^2 T for a field given by its degree-2 Taylor jet (of which
// `field_order` degrees are meaningful).
template <int R>
CovariantDerivatives<R> covariant_derivatives(const Tensor<Jet<2>, R>& field, int field_order,
                                              const GeometryCache& cache, int order) {
  if (order != 1 && order != 2) throw InputError("covariant derivative order must be 1 or 2");
  if (field_order < order) throw JetOrderError("covariant derivative of field", order, field_order);
  const auto gamma = christoffel_jet(cache);
  const auto d1 = covariant_derivative(field, gamma);
  CovariantDerivatives<R> out;
  out.order = order;
  out.first = convert_tensor<double>(d1);
  if (order == 2) out.second = convert_tensor<double>(covariant_derivative(d1, gamma));
  return out;
}

struct LaplacianPair {
  double laplacian = 0.0;
  double drift_laplacian = 0.0;
};

// Delta u and Delta_f u = Delta u - <grad u, grad f>.
LaplacianPair laplacians(const GeometryCache& cache, const Jet<2>& u, int u_order, const PotentialJet<double>& f);

// Delta_L h = -nabla^k nabla_k h + 2 R_ikjl h^kl - R_i^k h_kj - R_j^k h_ki.
Mat<double> lichnerowicz_apply(const Mat<Jet<2>>& h, int h_order, const GeometryCache& cache);

// Symmetric 2-tensor valued field on the chart, evaluable at every jet degree
// the pipeline uses.
class SymmetricField {
 public:
  virtual ~SymmetricField() = default;
  virtual Mat<double> operator()(const std::array<double, kDim>& x) const = 0;
  virtual Mat<Jet<1>> operator()(const std::array<Jet<1>, kDim>& x) const = 0;
  virtual Mat<Jet<2>> operator()(const std::array<Jet<2>, kDim>& x) const = 0;
  virtual Mat<Jet<3>> operator()(const std::array<Jet<3>, kDim>& x) const = 0;
  virtual Mat<Jet<4>> operator()(const std::array<Jet<4>, kDim>& x) const = 0;
  virtual Mat<Jet<5>> operator()(const std::array<Jet<5>, kDim>& x) const = 0;

  template <int N>
  Mat<Jet<N>> taylor(const ChartPoint& p) const {
    return (*this)(seed_coordinates<Jet<N>>(p.coords));
  }
};

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double operator()(const std::array<double, kDim>& x) const = 0;
  virtual Jet<1> operator()(const std::array<Jet<1>, kDim>& x) const = 0;
  virtual Jet<2> operator()(const std::array<Jet<2>, kDim>& x) const = 0;
  virtual Jet<3> operator()(const std::array<Jet<3>, kDim>& x) const = 0;
  virtual Jet<4> operator()(const std::array<Jet<4>, kDim>& x) const = 0;
  virtual Jet<5> operator()(const std::array<Jet<5>, kDim>& x) const = 0;

  template <int N>
  Jet<N> taylor(const ChartPoint& p) const {
    return (*this)(seed_coordinates<Jet<N>>(p.coords));
  }
};

namespace chart_detail {

template <class F>
class SymmetricFieldOf final : public SymmetricField {
 public:
  explicit SymmetricFieldOf(F f) : f_(std::move(f)) {}
  Mat<double> operator()(const std::array<double, kDim>& x) const override { return f_(x); }
  Mat<Jet<1>> operator()(const std::array<Jet<1>, kDim>& x) const override { return f_(x); }
  Mat<Jet<2>> operator()(const std::array<Jet<2>, kDim>& x) const override { return f_(x); }
  Mat<Jet<3>> operator()(const std::array<Jet<3>, kDim>& x) const override { return f_(x); }
  Mat<Jet<4>> operator()(const std::array<Jet<4>, kDim>& x) const override { return f_(x); }
  Mat<Jet<5>> operator()(const std::array<Jet<5>, kDim>& x) const override { return f_(x); }

 private:
  F f_;
};

template <class F>
class ScalarFieldOf final : public ScalarField {
 public:
  explicit ScalarFieldOf(F f) : f_(std::move(f)) {}
  double operator()(const std::array<double, kDim>& x) const override { return f_(x); }
  Jet<1> operator()(const std::array<Jet<1>, kDim>& x) const override { return f_(x); }
  Jet<2> operator()(const std::array<Jet<2>, kDim>& x) const override { return f_(x); }
  Jet<3> operator()(const std::array<Jet<3>, kDim>& x) const override { return f_(x); }
  Jet<4> operator()(const std::array<Jet<4>, kDim>& x) const override { return f_(x); }
  Jet<5> operator()(const std::array<Jet<5>, kDim>& x) const override { return f_(x); }

 private:
  F f_;
};

}  // namespace chart_detail

// Wraps a generic lambda `[](const auto& x) { ... return Mat<S>; }`.
template <class F>
std::shared_ptr<const SymmetricField> make_symmetric_field(F f) {
  return std::make_shared<chart_detail::SymmetricFieldOf<F>>(std::move(f));
}

template <class F>
std::shared_ptr<const ScalarField> make_scalar_field(F f) {
  return std::make_shared<chart_detail::ScalarFieldOf<F>>(std::move(f));
}

// g + t h as a field.
std::shared_ptr<const SymmetricField> perturbed(std::shared_ptr<const SymmetricField> base,
                                                std::shared_ptr<const SymmetricField> h, double t);

// Geometry of a metric field at a point through the cache (metric jet degree 4).
GeometryCache geometry_at(const SymmetricField& metric, const ChartPoint& p);

}  // namespace shrinker

#pragma once

// Divergence-free quadratic curvature tensors U, V, the Bach tensor, the
// Cotton tensor and its conformal counterpart D, in dimension four.

#include <string>

#include "shrinker/chart.hpp"

namespace shrinker {

enum class URoute { Direct, OnSoliton };
enum class BachRoute { Weyl, UV, D };
enum class DRoute { Conformal, SolitonFormula };

struct ParameterPair {
  double alpha = 0.0;
  double beta = 0.0;
};

enum class ParameterRegion { BachLine, InsideCone, OutsideCone, Origin };

ParameterRegion classify_parameters(const ParameterPair& p);
std::string to_string(ParameterRegion r);

// Largest component of Rc + nabla^2 f - g/2, relative to 1 + |Rc|.
template <class T>
double soliton_defect(const GeometryFields<T>& c, const PotentialJet<T>& f) {
  double worst = 0.0, scale = 1.0;
  for (int i = 0; i < Mat<T>::size; ++i) {
    worst = std::max(worst, std::abs(value_of(c.ricci[i] + f.ddf[i] - 0.5 * c.g[i])));
    scale = std::max(scale, std::abs(value_of(c.ricci[i])));
  }
  return worst / scale;
}

inline constexpr double kSolitonCheckTolerance = 1e-8;

template <class T>
void require_soliton(const GeometryFields<T>& c, const PotentialJet<T>& f, const char* what) {
  if (soliton_defect(c, f) > kSolitonCheckTolerance)
    throw NotASolitonError(std::string(what) + " is only valid on gradient shrinking solitons");
}

// R_i^p R_jp... helpers
template <class T>
Mat<T> ricci_up(const GeometryFields<T>& c) {
  return raise_both(c.ricci, c.ginv);
}

template <class T>
T ricci_norm_squared(const GeometryFields<T>& c) {
  return inner(c.ricci, c.ricci, c.ginv);
}

// V_ij = -nabla_i nabla_j R + Delta R g_ij + R R_ij - R^2/4 g_ij
template <class T>
Mat<T> tensor_V(const GeometryFields<T>& c) {
  Mat<T> v;
  const T quarter_r2 = 0.25 * c.scalar * c.scalar;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      v(i, j) = -0.5 * (c.dd_scalar(i, j) + c.dd_scalar(j, i)) + (c.lap_scalar - quarter_r2) * c.g(i, j) +
                c.scalar * c.ricci(i, j);
  return v;
}

// 2 R_ipjq R^pq
template <class T>
Mat<T> riemann_ricci_action(const GeometryFields<T>& c) {
  const Mat<T> rup = ricci_up(c);
  Mat<T> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      T s(0.0);
      for (int p = 0; p < kDim; ++p)
        for (int q = 0; q < kDim; ++q) s += c.riemann(i, p, j, q) * rup(p, q);
      out(i, j) = 2.0 * s;
    }
  return out;
}

// U_ij = 2R_ipjq R^pq + Delta R_ij - |Rc|^2/2 g - R R_ij - Delta R/2 g + R^2/4 g
template <class T>
Mat<T> tensor_U_direct(const GeometryFields<T>& c) {
  const Mat<T> rr = riemann_ricci_action(c);
  const T g_coef = -0.5 * ricci_norm_squared(c) - 0.5 * c.lap_scalar + 0.25 * c.scalar * c.scalar;
  Mat<T> u;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      u(i, j) = rr(i, j) + c.lap_ricci(i, j) - c.scalar * c.ricci(i, j) + g_coef * c.g(i, j);
  return u;
}

// Soliton simplification: U_ij = R_ij + nabla_k R_ij nabla^k f - |Rc|^2/2 g
// - R R_ij - Delta R/2 g + R^2/4 g.
template <class T>
Mat<T> tensor_U_on_soliton(const GeometryFields<T>& c, const PotentialJet<T>& f) {
  require_soliton(c, f, "the on-soliton U route");
  const Vec<T> df_up = raise(f.df, c.ginv);
  const T g_coef = -0.5 * ricci_norm_squared(c) - 0.5 * c.lap_scalar + 0.25 * c.scalar * c.scalar;
  Mat<T> u;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      T drift(0.0);
      for (int k = 0; k < kDim; ++k) drift += c.d_ricci(i, j, k) * df_up(k);
      u(i, j) = c.ricci(i, j) + drift - c.scalar * c.ricci(i, j) + g_coef * c.g(i, j);
    }
  return u;
}

template <class T>
Mat<T> tensor_U(const GeometryFields<T>& c, URoute route, const PotentialJet<T>* f = nullptr) {
  if (route == URoute::Direct) return tensor_U_direct(c);
  if (f == nullptr) throw NotASolitonError("the on-soliton U route needs a potential function");
  return tensor_U_on_soliton(c, *f);
}

// C_ijk = -2 nabla^l W_ijkl
template <class T>
Tensor<T, 3> cotton_tensor(const GeometryFields<T>& c) {
  Tensor<T, 3> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) {
        T s(0.0);
        for (int l = 0; l < kDim; ++l)
          for (int m = 0; m < kDim; ++m) s += c.ginv(l, m) * c.d_weyl(i, j, k, l, m);
        out(i, j, k) = -2.0 * s;
      }
  return out;
}

// D_ijk = C_ijk + W_ijkl nabla^l f
template <class T>
Tensor<T, 3> d_tensor_conformal(const GeometryFields<T>& c, const PotentialJet<T>& f) {
  Tensor<T, 3> out = cotton_tensor(c);
  const Vec<T> df_up = raise(f.df, c.ginv);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k)
        for (int l = 0; l < kDim; ++l) out(i, j, k) += c.weyl(i, j, k, l) * df_up(l);
  return out;
}

// D_ijk = (R_jk f_i - R_ik f_j)/2 + (g_jk R_i - g_ik R_j)/12 - R (g_jk f_i - g_ik f_j)/6
template <class T>
Tensor<T, 3> d_tensor_soliton(const GeometryFields<T>& c, const PotentialJet<T>& f) {
  require_soliton(c, f, "the soliton formula for D");
  Tensor<T, 3> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k)
        out(i, j, k) = 0.5 * (c.ricci(j, k) * f.df(i) - c.ricci(i, k) * f.df(j)) +
                       (c.g(j, k) * c.d_scalar(i) - c.g(i, k) * c.d_scalar(j)) / 12.0 -
                       c.scalar * (c.g(j, k) * f.df(i) - c.g(i, k) * f.df(j)) / 6.0;
  return out;
}

template <class T>
Tensor<T, 3> d_tensor(const GeometryFields<T>& c, const PotentialJet<T>& f, DRoute route) {
  return route == DRoute::Conformal ? d_tensor_conformal(c, f) : d_tensor_soliton(c, f);
}

// B_ij = nabla^k nabla^l W_ikjl + R^kl W_ikjl / 2
template <class T>
Mat<T> bach_weyl(const GeometryFields<T>& c) {
  const Mat<T> rup = ricci_up(c);
  Mat<T> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      T s(0.0);
      for (int k = 0; k < kDim; ++k)
        for (int l = 0; l < kDim; ++l) {
          T dd(0.0);
          for (int a = 0; a < kDim; ++a)
            for (int b = 0; b < kDim; ++b) dd += c.ginv(k, a) * c.ginv(l, b) * c.dd_weyl(i, k, j, l, b, a);
          s += dd + 0.5 * rup(k, l) * c.weyl(i, k, j, l);
        }
      out(i, j) = s;
    }
  return out;
}

template <class T>
Mat<T> bach_uv(const GeometryFields<T>& c) {
  return tensor_U_direct(c) * 0.5 + tensor_V(c) * (1.0 / 6.0);
}

// B_ij = -(nabla^k D_ikj + C_jli nabla^l f / 2) / 2, with D from the conformal route.
template <class T>
Mat<T> bach_from_d(const GeometryFields<T>& c, const PotentialJet<T>& f) {
  require_soliton(c, f, "the D route for the Bach tensor");
  const Vec<T> df_up = raise(f.df, c.ginv);
  const Tensor<T, 3> cot = cotton_tensor(c);
  // nabla_m D_ikj = nabla_m C_ikj + nabla_m W_ikjl f^l + W_ikjl nabla_m f^l
  Mat<T> hess_mixed;  // nabla_m nabla^l f = g^{la} nabla^2 f(a, m)
  for (int m = 0; m < kDim; ++m)
    for (int l = 0; l < kDim; ++l) {
      T s(0.0);
      for (int a = 0; a < kDim; ++a) s += c.ginv(l, a) * f.ddf(a, m);
      hess_mixed(m, l) = s;
    }
  Mat<T> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      T div_d(0.0);
      for (int k = 0; k < kDim; ++k)
        for (int m = 0; m < kDim; ++m) {
          T dmd(0.0);
          for (int l = 0; l < kDim; ++l) {
            T dc(0.0);
            for (int a = 0; a < kDim; ++a) dc += c.ginv(l, a) * c.dd_weyl(i, k, j, l, a, m);
            dmd += -2.0 * dc + c.d_weyl(i, k, j, l, m) * df_up(l) + c.weyl(i, k, j, l) * hess_mixed(m, l);
          }
          div_d += c.ginv(k, m) * dmd;
        }
      T cf(0.0);
      for (int l = 0; l < kDim; ++l) cf += cot(j, l, i) * df_up(l);
      out(i, j) = -0.5 * (div_d + 0.5 * cf);
    }
  return out;
}

template <class T>
Mat<T> bach_tensor(const GeometryFields<T>& c, BachRoute route, const PotentialJet<T>* f = nullptr) {
  switch (route) {
    case BachRoute::Weyl: return bach_weyl(c);
    case BachRoute::UV: return bach_uv(c);
    case BachRoute::D:
      if (f == nullptr) throw NotASolitonError("the D route for the Bach tensor needs a potential function");
      return bach_from_d(c, *f);
  }
  return {};
}

template <class T>
Mat<T> bach_like(const ParameterPair& p, const GeometryFields<T>& c) {
  if (classify_parameters(p) == ParameterRegion::Origin)
    throw InputError("Bach-like tensor needs (alpha, beta) != (0, 0)");
  return tensor_U_direct(c) * p.alpha + tensor_V(c) * p.beta;
}

struct TraceReport {
  double trU = 0.0;
  double trV = 0.0;
  double trB = 0.0;
  double laplacian_R = 0.0;
};

TraceReport traces(const GeometryCache& c);

// (div T)_j = g^ik nabla_k T_ij for T given with one extra jet degree.
inline Vec<double> divergence(const Mat<Jet<1>>& t, const GeometryFields<Jet<1>>& c) {
  const auto dt = convert_tensor<double>(covariant_derivative(t, c.christoffel));
  const auto ginv = convert_tensor<double>(c.ginv);
  Vec<double> out;
  for (int j = 0; j < kDim; ++j)
    for (int i = 0; i < kDim; ++i)
      for (int k = 0; k < kDim; ++k) out(j) += ginv(i, k) * dt(i, j, k);
  return out;
}

struct DivergenceReport {
  Vec<double> div_U;
  Vec<double> div_V;
  double scale_U = 0.0;  // max |U| component at the point
  double scale_V = 0.0;
};

// div U and div V at a point from degree-5 metric jets.
DivergenceReport divergences(const SymmetricField& metric, const ChartPoint& p);

}  // namespace shrinker

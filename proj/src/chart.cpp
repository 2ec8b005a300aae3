#include "shrinker/chart.hpp"

#include <string>
#include <vector>

namespace shrinker {

namespace {

// Axes of a monomial with repetition, e.g. (2,0,1,0) -> {0,0,2}.
std::vector<int> axes_of(const Exponent& e) {
  std::vector<int> axes;
  for (int a = 0; a < kDim; ++a)
    for (int r = 0; r < e[a]; ++r) axes.push_back(a);
  return axes;
}

double multi_factorial(const Exponent& e) {
  double s = 1.0;
  for (int v : e) s *= jet_detail::factorial(v);
  return s;
}

double metric_partial(const MetricJet& jet, int i, int j, const std::vector<int>& ax) {
  switch (ax.size()) {
    case 0: return jet.g(i, j);
    case 1: return jet.dg(i, j, ax[0]);
    case 2: return jet.d2g(i, j, ax[0], ax[1]);
    case 3: return jet.d3g(i, j, ax[0], ax[1], ax[2]);
    default: return jet.d4g(i, j, ax[0], ax[1], ax[2], ax[3]);
  }
}

double scale_of(const MetricJet& jet) {
  double s = 0.0;
  for (int i = 0; i < Mat<double>::size; ++i) s = std::max(s, std::abs(jet.g[i]));
  return s;
}

template <int R>
bool symmetric_block(const Tensor<double, R>& t, double tol) {
  // metric-index swap and every transposition of neighbouring derivative indices
  for (int f = 0; f < Tensor<double, R>::size; ++f) {
    auto idx = Tensor<double, R>::unflatten(f);
    auto flat_of = [](const std::array<int, R>& ix) {
      int g = 0;
      for (int q = 0; q < R; ++q) g = g * kDim + ix[q];
      return g;
    };
    auto sw = idx;
    std::swap(sw[0], sw[1]);
    if (std::abs(t[f] - t[flat_of(sw)]) > tol) return false;
    for (int s = 2; s + 1 < R; ++s) {
      auto p = idx;
      std::swap(p[s], p[s + 1]);
      if (std::abs(t[f] - t[flat_of(p)]) > tol) return false;
    }
  }
  return true;
}

}  // namespace

MetricJet metric_jet_from(const Mat<Jet<4>>& g) {
  MetricJet jet;
  jet.order = 4;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      const Jet<4>& x = g(i, j);
      jet.g(i, j) = x.value();
      for (int a = 0; a < kDim; ++a) {
        Exponent e1{};
        e1[a] += 1;
        jet.dg(i, j, a) = x.partial(e1);
        for (int b = 0; b < kDim; ++b) {
          Exponent e2 = e1;
          e2[b] += 1;
          jet.d2g(i, j, a, b) = x.partial(e2);
          for (int c = 0; c < kDim; ++c) {
            Exponent e3 = e2;
            e3[c] += 1;
            jet.d3g(i, j, a, b, c) = x.partial(e3);
            for (int d = 0; d < kDim; ++d) {
              Exponent e4 = e3;
              e4[d] += 1;
              jet.d4g(i, j, a, b, c, d) = x.partial(e4);
            }
          }
        }
      }
    }
  return jet;
}

Mat<Jet<4>> metric_taylor(const MetricJet& jet) {
  if (jet.order < 4) throw JetOrderError("metric Taylor jet", 4, jet.order);
  Mat<Jet<4>> g;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Jet<4> x;
      for (int n = 0; n < Jet<4>::size; ++n) {
        const Exponent& e = jet_detail::kMonomials.exps[n];
        x[n] = metric_partial(jet, i, j, axes_of(e)) / multi_factorial(e);
      }
      g(i, j) = x;
    }
  return g;
}

void validate_metric_jet(const MetricJet& jet) {
  const double tol = 1e-12 * (1.0 + scale_of(jet));
  if (!symmetric_block(jet.g, tol)) throw InputError("metric jet: g is not symmetric");
  Mat<double> lower;
  if (!cholesky(jet.g, lower)) throw InputError("metric jet: g is not positive definite");
  if (jet.order >= 1 && !symmetric_block(jet.dg, tol)) throw InputError("metric jet: dg lacks index symmetry");
  if (jet.order >= 2 && !symmetric_block(jet.d2g, tol)) throw InputError("metric jet: d2g lacks index symmetry");
  if (jet.order >= 3 && !symmetric_block(jet.d3g, tol)) throw InputError("metric jet: d3g lacks index symmetry");
  if (jet.order >= 4 && !symmetric_block(jet.d4g, tol)) throw InputError("metric jet: d4g lacks index symmetry");
}

GeometryCache geometry_cache(const MetricJet& jet) {
  validate_metric_jet(jet);
  if (jet.order < 4) throw JetOrderError("geometry_cache (second covariant derivative of Weyl)", 4, jet.order);
  return extract_fields<double>(JetGeometry<4>(metric_taylor(jet)));
}

Tensor<Jet<1>, 3> christoffel_jet(const GeometryCache& cache) {
  Tensor<Jet<1>, 3> out;
  for (int f = 0; f < Tensor<double, 3>::size; ++f) {
    Jet<1> x(cache.christoffel[f]);
    for (int m = 0; m < kDim; ++m) x[1 + m] = cache.d_christoffel[f * kDim + m];
    out[f] = x;
  }
  return out;
}

LaplacianPair laplacians(const GeometryCache& cache, const Jet<2>& u, int u_order, const PotentialJet<double>& f) {
  if (u_order < 2) throw JetOrderError("laplacian of scalar", 2, u_order);
  Vec<Jet<1>> du;
  for (int m = 0; m < kDim; ++m) du(m) = partial(u, m);
  const auto hess = convert_tensor<double>(covariant_derivative(du, christoffel_jet(cache)));
  LaplacianPair out;
  out.laplacian = trace(hess, cache.ginv);
  double drift = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) drift += cache.ginv(i, j) * du(i).value() * f.df(j);
  out.drift_laplacian = out.laplacian - drift;
  return out;
}

Mat<double> lichnerowicz_apply(const Mat<Jet<2>>& h, int h_order, const GeometryCache& cache) {
  const CovariantDerivatives<2> d = covariant_derivatives(h, h_order, cache, 2);
  const Mat<double> hv = convert_tensor<double>(h);
  const Mat<double> hup = raise_both(hv, cache.ginv);
  Mat<double> ric_mixed;  // R_i^k
  for (int i = 0; i < kDim; ++i)
    for (int k = 0; k < kDim; ++k)
      for (int a = 0; a < kDim; ++a) ric_mixed(i, k) += cache.ricci(i, a) * cache.ginv(a, k);
  Mat<double> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      double s = 0.0;
      for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) s -= cache.ginv(a, b) * d.second(i, j, a, b);
      for (int k = 0; k < kDim; ++k) {
        for (int l = 0; l < kDim; ++l) s += 2.0 * cache.riemann(i, k, j, l) * hup(k, l);
        s -= ric_mixed(i, k) * hv(k, j) + ric_mixed(j, k) * hv(k, i);
      }
      out(i, j) = s;
    }
  return out;
}

namespace {

class PerturbedField final : public SymmetricField {
 public:
  PerturbedField(std::shared_ptr<const SymmetricField> base, std::shared_ptr<const SymmetricField> h, double t)
      : base_(std::move(base)), h_(std::move(h)), t_(t) {}

  Mat<double> operator()(const std::array<double, kDim>& x) const override { return eval(x); }
  Mat<Jet<1>> operator()(const std::array<Jet<1>, kDim>& x) const override { return eval(x); }
  Mat<Jet<2>> operator()(const std::array<Jet<2>, kDim>& x) const override { return eval(x); }
  Mat<Jet<3>> operator()(const std::array<Jet<3>, kDim>& x) const override { return eval(x); }
  Mat<Jet<4>> operator()(const std::array<Jet<4>, kDim>& x) const override { return eval(x); }
  Mat<Jet<5>> operator()(const std::array<Jet<5>, kDim>& x) const override { return eval(x); }

 private:
  template <class S>
  Mat<S> eval(const std::array<S, kDim>& x) const {
    return (*base_)(x) + (*h_)(x) * t_;
  }

  std::shared_ptr<const SymmetricField> base_, h_;
  double t_;
};

}  // namespace

std::shared_ptr<const SymmetricField> perturbed(std::shared_ptr<const SymmetricField> base,
                                                std::shared_ptr<const SymmetricField> h, double t) {
  return std::make_shared<PerturbedField>(std::move(base), std::move(h), t);
}

GeometryCache geometry_at(const SymmetricField& metric, const ChartPoint& p) {
  return extract_fields<double>(JetGeometry<4>(metric.taylor<4>(p)));
}

}  // namespace shrinker

#pragma once

// Truncated multivariate Taylor arithmetic in four variables.
//
// A Jet<D> holds the Taylor coefficients of a smooth function about a chart
// point up to total degree D.  Arithmetic and elementary functions propagate
// all mixed partials exactly (up to rounding), which makes Jet<D> a
// forward-mode automatic differentiation type of order D.  Coefficients are
// stored in graded order, so the first jet_size(d) entries of a Jet<D> form
// its truncation to degree d.

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <type_traits>

namespace shrinker {

inline constexpr int kDim = 4;
inline constexpr int kMaxJetDegree = 5;

constexpr int jet_size(int degree) {
  return degree < 0 ? 0 : (degree + 1) * (degree + 2) * (degree + 3) * (degree + 4) / 24;
}

using Exponent = std::array<int, kDim>;

namespace jet_detail {

constexpr int kNumMonomials = jet_size(kMaxJetDegree);

struct MonomialList {
  std::array<Exponent, kNumMonomials> exps{};
  std::array<int, kNumMonomials> degree{};
};

constexpr MonomialList make_monomials() {
  MonomialList m{};
  int n = 0;
  for (int d = 0; d <= kMaxJetDegree; ++d) {
    for (int a = d; a >= 0; --a) {
      for (int b = d - a; b >= 0; --b) {
        for (int c = d - a - b; c >= 0; --c) {
          m.exps[n] = {a, b, c, d - a - b - c};
          m.degree[n] = d;
          ++n;
        }
      }
    }
  }
  return m;
}

inline constexpr MonomialList kMonomials = make_monomials();

constexpr int monomial_index(const Exponent& e) {
  for (int i = 0; i < kNumMonomials; ++i) {
    const auto& x = kMonomials.exps[i];
    if (x[0] == e[0] && x[1] == e[1] && x[2] == e[2] && x[3] == e[3]) return i;
  }
  return -1;
}

struct ProductTerm {
  int a, b, out;
};

constexpr int product_count(int degree) {
  // pairs of monomials with total degree <= D: monomials in 8 variables
  int n = 1;
  for (int i = 1; i <= 8; ++i) n = n * (degree + i) / i;
  return n;
}

template <int D>
constexpr std::array<ProductTerm, product_count(D)> make_products() {
  std::array<ProductTerm, product_count(D)> out{};
  int n = 0;
  for (int i = 0; i < jet_size(D); ++i) {
    for (int j = 0; j < jet_size(D); ++j) {
      if (kMonomials.degree[i] + kMonomials.degree[j] > D) continue;
      const auto& a = kMonomials.exps[i];
      const auto& b = kMonomials.exps[j];
      out[n++] = {i, j, monomial_index({a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]})};
    }
  }
  return out;
}

template <int D>
inline constexpr auto kProducts = make_products<D>();

// For the derivative along `axis` of a degree-D jet: output coefficient i
// (a degree-(D-1) monomial) is factor * input[from].
struct DerivativeTerm {
  int from;
  double factor;
};

template <int D>
constexpr std::array<std::array<DerivativeTerm, jet_size(D - 1)>, kDim> make_derivatives() {
  std::array<std::array<DerivativeTerm, jet_size(D - 1)>, kDim> out{};
  for (int axis = 0; axis < kDim; ++axis) {
    for (int i = 0; i < jet_size(D - 1); ++i) {
      Exponent e = kMonomials.exps[i];
      e[axis] += 1;
      out[axis][i] = {monomial_index(e), static_cast<double>(e[axis])};
    }
  }
  return out;
}

template <int D>
inline constexpr auto kDerivatives = make_derivatives<D>();

constexpr double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace jet_detail

template <int D>
class Jet {
  static_assert(D >= 0 && D <= kMaxJetDegree, "unsupported jet degree");

 public:
  static constexpr int degree = D;
  static constexpr int size = jet_size(D);

  constexpr Jet() = default;
  constexpr Jet(double value) { c_[0] = value; }  // NOLINT: implicit promotion of constants

  // The chart coordinate x_axis expanded about `value`.
  static Jet variable(double value, int axis) {
    Jet j(value);
    if constexpr (D >= 1) j.c_[1 + axis] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  const std::array<double, size>& coefficients() const { return c_; }

  double coefficient(const Exponent& e) const {
    const int i = jet_detail::monomial_index(e);
    return (i >= 0 && i < size) ? c_[i] : 0.0;
  }

  // The mixed partial derivative d^e at the expansion point.
  double partial(const Exponent& e) const {
    double scale = 1.0;
    for (int v : e) scale *= jet_detail::factorial(v);
    return coefficient(e) * scale;
  }

  Jet operator-() const {
    Jet r;
    for (int i = 0; i < size; ++i) r.c_[i] = -c_[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < size; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < size; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(double s) {
    for (auto& v : c_) v /= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o);

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (const auto& t : jet_detail::kProducts<D>) r.c_[t.out] += a.c_[t.a] * b.c_[t.b];
    return r;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

 private:
  std::array<double, size> c_{};
};

// Applies a scalar function given its derivatives at the expansion point:
// sum_n derivs[n] / n! * (a - a0)^n, evaluated by Horner's rule.
template <int D>
Jet<D> compose(const Jet<D>& a, const std::array<double, D + 1>& derivs) {
  Jet<D> tail = a;
  tail[0] = 0.0;
  Jet<D> r(derivs[D] / jet_detail::factorial(D));
  for (int n = D - 1; n >= 0; --n) {
    r = r * tail;
    r[0] += derivs[n] / jet_detail::factorial(n);
  }
  return r;
}

template <int D>
Jet<D> inverse(const Jet<D>& a) {
  std::array<double, D + 1> d{};
  const double x = a.value();
  double p = 1.0 / x;
  for (int n = 0; n <= D; ++n) {
    d[n] = p;
    p *= -(n + 1) / x;
  }
  return compose(a, d);
}

template <int D>
Jet<D>& Jet<D>::operator/=(const Jet& o) {
  *this = *this * inverse(o);
  return *this;
}

template <int D>
Jet<D> operator/(const Jet<D>& a, const Jet<D>& b) {
  return a * inverse(b);
}

template <int D>
Jet<D> operator/(double s, const Jet<D>& b) {
  return s * inverse(b);
}

template <int D>
Jet<D> exp(const Jet<D>& a) {
  std::array<double, D + 1> d{};
  d.fill(std::exp(a.value()));
  return compose(a, d);
}

template <int D>
Jet<D> log(const Jet<D>& a) {
  std::array<double, D + 1> d{};
  const double x = a.value();
  d[0] = std::log(x);
  double p = 1.0 / x;
  for (int n = 1; n <= D; ++n) {
    d[n] = p;
    p *= -n / x;
  }
  return compose(a, d);
}

template <int D>
Jet<D> sin(const Jet<D>& a) {
  std::array<double, D + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  for (int n = 0; n <= D; ++n) d[n] = cycle[n % 4];
  return compose(a, d);
}

template <int D>
Jet<D> cos(const Jet<D>& a) {
  std::array<double, D + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  for (int n = 0; n <= D; ++n) d[n] = cycle[n % 4];
  return compose(a, d);
}

template <int D>
Jet<D> pow(const Jet<D>& a, double p) {
  std::array<double, D + 1> d{};
  const double x = a.value();
  double coef = 1.0;
  for (int n = 0; n <= D; ++n) {
    d[n] = coef * std::pow(x, p - n);
    coef *= (p - n);
  }
  return compose(a, d);
}

template <int D>
Jet<D> sqrt(const Jet<D>& a) {
  return pow(a, 0.5);
}

// Derivative along one chart axis; loses one degree.
template <int D>
Jet<D - 1> partial(const Jet<D>& a, int axis) {
  static_assert(D >= 1, "cannot differentiate a degree-0 jet");
  Jet<D - 1> r;
  const auto& terms = jet_detail::kDerivatives<D>[axis];
  for (int i = 0; i < Jet<D - 1>::size; ++i) r[i] = terms[i].factor * a[terms[i].from];
  return r;
}

template <int To, int D>
Jet<To> truncate(const Jet<D>& a) {
  static_assert(To <= D, "truncation cannot raise the degree");
  Jet<To> r;
  for (int i = 0; i < Jet<To>::size; ++i) r[i] = a[i];
  return r;
}

template <int D>
std::ostream& operator<<(std::ostream& os, const Jet<D>& a) {
  return os << "Jet<" << D << ">(" << a.value() << ", ...)";
}

// Scalar-type helpers so generic code can treat double and Jet<D> alike.
inline double value_of(double x) { return x; }
template <int D>
double value_of(const Jet<D>& x) {
  return x.value();
}

template <class S>
struct jet_degree {
  static constexpr int value = 0;
};
template <int D>
struct jet_degree<Jet<D>> {
  static constexpr int value = D;
};

// A jet whose value is `value` and whose linear part is the chart offset.
template <class S>
std::array<S, kDim> seed_coordinates(const std::array<double, kDim>& point) {
  std::array<S, kDim> x{};
  for (int a = 0; a < kDim; ++a) {
    if constexpr (std::is_same_v<S, double>) {
      x[a] = point[a];
    } else {
      x[a] = S::variable(point[a], a);
    }
  }
  return x;
}

}  // namespace shrinker

#pragma once

// Dense all-covariant tensors over the four chart indices.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <vector>

#include "shrinker/jet.hpp"

namespace shrinker {

constexpr int pow4(int rank) {
  int n = 1;
  for (int i = 0; i < rank; ++i) n *= kDim;
  return n;
}

template <class T, int Rank>
class Tensor {
 public:
  static constexpr int rank = Rank;
  static constexpr int size = pow4(Rank);

  Tensor() : data_(size, T(0.0)) {}

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank, "index count must match tensor rank");
    return data_[flat(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank, "index count must match tensor rank");
    return data_[flat(idx...)];
  }

  T& operator[](int i) { return data_[i]; }
  const T& operator[](int i) const { return data_[i]; }

  Tensor& operator+=(const Tensor& o) {
    for (int i = 0; i < size; ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    for (int i = 0; i < size; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, double s) { return a *= s; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

  // Multi-index of a flat position, most significant index first.
  static std::array<int, (Rank > 0 ? Rank : 1)> unflatten(int flat_index) {
    std::array<int, (Rank > 0 ? Rank : 1)> idx{};
    for (int s = Rank - 1; s >= 0; --s) {
      idx[s] = flat_index % kDim;
      flat_index /= kDim;
    }
    return idx;
  }

 private:
  template <class... I>
  static int flat(I... idx) {
    int f = 0;
    ((f = f * kDim + static_cast<int>(idx)), ...);
    return f;
  }

  std::vector<T> data_;
};

template <class T>
using Vec = Tensor<T, 1>;
template <class T>
using Mat = Tensor<T, 2>;

template <class To, class From, int R>
Tensor<To, R> convert_tensor(const Tensor<From, R>& t) {
  Tensor<To, R> out;
  for (int i = 0; i < Tensor<From, R>::size; ++i) {
    if constexpr (std::is_same_v<To, double>) {
      out[i] = value_of(t[i]);
    } else if constexpr (std::is_same_v<From, double>) {
      out[i] = To(t[i]);
    } else {
      out[i] = truncate<To::degree>(t[i]);
    }
  }
  return out;
}

template <class T>
Mat<T> identity_matrix() {
  Mat<T> m;
  for (int i = 0; i < kDim; ++i) m(i, i) = T(1.0);
  return m;
}

template <class T>
T trace(const Mat<T>& t, const Mat<T>& ginv) {
  T s(0.0);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) s += ginv(i, j) * t(i, j);
  return s;
}

// Full metric contraction <a, b> of two rank-R covariant tensors.
template <class T, int R>
T inner(const Tensor<T, R>& a, const Tensor<T, R>& b, const Mat<T>& ginv) {
  if constexpr (R == 0) {
    return a[0] * b[0];
  } else {
    // raise every index of b in turn
    Tensor<T, R> raised = b;
    for (int slot = 0; slot < R; ++slot) {
      Tensor<T, R> next;
      for (int f = 0; f < Tensor<T, R>::size; ++f) {
        auto idx = Tensor<T, R>::unflatten(f);
        T s(0.0);
        const int keep = idx[slot];
        for (int p = 0; p < kDim; ++p) {
          idx[slot] = p;
          int g = 0;
          for (int q = 0; q < R; ++q) g = g * kDim + idx[q];
          s += ginv(keep, p) * raised[g];
        }
        next[f] = s;
      }
      raised = next;
    }
    T s(0.0);
    for (int f = 0; f < Tensor<T, R>::size; ++f) s += a[f] * raised[f];
    return s;
  }
}

template <class T, int R>
T norm_squared(const Tensor<T, R>& a, const Mat<T>& ginv) {
  return inner(a, a, ginv);
}

// t(u, v) for a covariant 2-tensor and two vectors given by their covariant
// components (indices raised internally).
template <class T>
T evaluate_on_covectors(const Mat<T>& t, const Vec<T>& u, const Vec<T>& v, const Mat<T>& ginv) {
  Vec<T> uu, vv;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      uu(i) += ginv(i, j) * u(j);
      vv(i) += ginv(i, j) * v(j);
    }
  T s(0.0);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) s += t(i, j) * uu(i) * vv(j);
  return s;
}

template <class T>
Vec<T> raise(const Vec<T>& v, const Mat<T>& ginv) {
  Vec<T> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out(i) += ginv(i, j) * v(j);
  return out;
}

template <class T>
Mat<T> raise_both(const Mat<T>& t, const Mat<T>& ginv) {
  Mat<T> tmp, out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int a = 0; a < kDim; ++a) tmp(i, j) += ginv(i, a) * t(a, j);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int b = 0; b < kDim; ++b) out(i, j) += tmp(i, b) * ginv(b, j);
  return out;
}

// Inverse of a symmetric positive-definite matrix by Gauss-Jordan
// elimination without pivoting (valid for SPD input).
template <class T>
Mat<T> inverse_spd(const Mat<T>& m) {
  std::array<std::array<T, 2 * kDim>, kDim> a{};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      a[i][j] = m(i, j);
      a[i][kDim + j] = T(i == j ? 1.0 : 0.0);
    }
  }
  for (int col = 0; col < kDim; ++col) {
    const T pivot_inv = T(1.0) / a[col][col];
    for (int j = 0; j < 2 * kDim; ++j) a[col][j] = a[col][j] * pivot_inv;
    for (int i = 0; i < kDim; ++i) {
      if (i == col) continue;
      const T factor = a[i][col];
      for (int j = 0; j < 2 * kDim; ++j) a[i][j] -= factor * a[col][j];
    }
  }
  Mat<T> inv;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) inv(i, j) = a[i][kDim + j];
  return inv;
}

template <class T>
T determinant(const Mat<T>& m) {
  // LU without pivoting; callers pass SPD matrices
  std::array<std::array<T, kDim>, kDim> a{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) a[i][j] = m(i, j);
  T det(1.0);
  for (int col = 0; col < kDim; ++col) {
    det = det * a[col][col];
    const T pivot_inv = T(1.0) / a[col][col];
    for (int i = col + 1; i < kDim; ++i) {
      const T factor = a[i][col] * pivot_inv;
      for (int j = col; j < kDim; ++j) a[i][j] -= factor * a[col][j];
    }
  }
  return det;
}

// Lower Cholesky factor of an SPD matrix; returns false if not SPD.
bool cholesky(const Mat<double>& m, Mat<double>& lower);

// Components of a covariant 2-tensor in the orthonormal frame obtained from
// the Cholesky factor of g (for diagonal g: e_a = d_a / sqrt(g_aa)).
Mat<double> to_orthonormal(const Mat<double>& t, const Mat<double>& g);

// Same for a covariant 3-tensor.
Tensor<double, 3> to_orthonormal(const Tensor<double, 3>& t, const Mat<double>& g);

template <int R>
double max_abs(const Tensor<double, R>& t) {
  double m = 0.0;
  for (int i = 0; i < Tensor<double, R>::size; ++i) m = std::max(m, std::abs(t[i]));
  return m;
}

}  // namespace shrinker

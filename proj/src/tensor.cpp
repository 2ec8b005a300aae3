#include "shrinker/tensor.hpp"

namespace shrinker {

bool cholesky(const Mat<double>& m, Mat<double>& lower) {
  lower = Mat<double>();
  for (int j = 0; j < kDim; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > 0.0)) return false;
    lower(j, j) = std::sqrt(d);
    for (int i = j + 1; i < kDim; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / lower(j, j);
    }
  }
  return true;
}

namespace {

// Frame matrix E = L^{-T}: column a holds the coordinate components of e_a.
Mat<double> frame_matrix(const Mat<double>& g) {
  Mat<double> lower;
  if (!cholesky(g, lower)) return identity_matrix<double>();
  // invert the lower-triangular factor by forward substitution
  Mat<double> linv;
  for (int col = 0; col < kDim; ++col) {
    for (int i = 0; i < kDim; ++i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= lower(i, k) * linv(k, col);
      linv(i, col) = s / lower(i, i);
    }
  }
  Mat<double> e;
  for (int i = 0; i < kDim; ++i)
    for (int a = 0; a < kDim; ++a) e(i, a) = linv(a, i);
  return e;
}

}  // namespace

Mat<double> to_orthonormal(const Mat<double>& t, const Mat<double>& g) {
  const Mat<double> e = frame_matrix(g);
  Mat<double> out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      double s = 0.0;
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) s += e(i, a) * e(j, b) * t(i, j);
      out(a, b) = s;
    }
  return out;
}

Tensor<double, 3> to_orthonormal(const Tensor<double, 3>& t, const Mat<double>& g) {
  const Mat<double> e = frame_matrix(g);
  Tensor<double, 3> out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c) {
        double s = 0.0;
        for (int i = 0; i < kDim; ++i)
          for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k) s += e(i, a) * e(j, b) * e(k, c) * t(i, j, k);
        out(a, b, c) = s;
      }
  return out;
}

}  // namespace shrinker

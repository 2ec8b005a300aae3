#include "shrinker/curvature.hpp"

namespace shrinker {

ParameterRegion classify_parameters(const ParameterPair& p) {
  const double a = p.alpha, b = p.beta;
  if (a == 0.0 && b == 0.0) return ParameterRegion::Origin;
  // 1/3 parsed to binary is not exact; allow a few ulps on the line
  if (std::abs(a - 3.0 * b) <= 4e-16 * (std::abs(a) + 3.0 * std::abs(b))) return ParameterRegion::BachLine;
  const bool upper = a >= 0.0 && b > a / 3.0;
  const bool lower = a <= 0.0 && b < a / 3.0;
  return (upper || lower) ? ParameterRegion::InsideCone : ParameterRegion::OutsideCone;
}

std::string to_string(ParameterRegion r) {
  switch (r) {
    case ParameterRegion::BachLine: return "BachLine";
    case ParameterRegion::InsideCone: return "InsideCone";
    case ParameterRegion::OutsideCone: return "OutsideCone";
    case ParameterRegion::Origin: return "Origin";
  }
  return "unknown";
}

TraceReport traces(const GeometryCache& c) {
  TraceReport t;
  t.trU = trace(tensor_U_direct(c), c.ginv);
  t.trV = trace(tensor_V(c), c.ginv);
  t.trB = trace(bach_weyl(c), c.ginv);
  t.laplacian_R = c.lap_scalar;
  return t;
}

DivergenceReport divergences(const SymmetricField& metric, const ChartPoint& p) {
  const JetGeometry<5> geo(metric.taylor<5>(p));
  const auto fields = extract_fields<Jet<1>>(geo);
  const Mat<Jet<1>> u = tensor_U_direct(fields);
  const Mat<Jet<1>> v = tensor_V(fields);
  DivergenceReport out;
  out.div_U = divergence(u, fields);
  out.div_V = divergence(v, fields);
  out.scale_U = max_abs(convert_tensor<double>(u));
  out.scale_V = max_abs(convert_tensor<double>(v));
  return out;
}

}  // namespace shrinker

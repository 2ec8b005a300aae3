#pragma once

// Pointwise verification suites: catalog oracles, route agreement, soliton
// identities, traces and divergences at sampled chart points.

#include <cstdint>
#include <string>
#include <vector>

#include "shrinker/catalog.hpp"
#include "shrinker/quadrature.hpp"

namespace shrinker {

struct PointwiseCheck {
  std::string id;
  std::string model;
  int points = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

inline constexpr double kOracleTolerance = 1e-8;
inline constexpr double kRouteTolerance = 1e-8;
inline constexpr double kTraceTolerance = 1e-8;
inline constexpr double kDivergenceTolerance = 1e-6;

// Uniform random points in the model's chart box.
std::vector<ChartPoint> sample_chart_points(const SolitonModel& model, int count, std::uint64_t seed);
// Regular n x n grid on the model's active axes (torus models).
std::vector<ChartPoint> torus_grid_points(const SolitonModel& model, int n);

// Every oracle of the model: orthonormal-frame components (or scalar values)
// against the frozen table, relative to 1 + |oracle|.
std::vector<PointwiseCheck> oracle_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                          Execution exec = Execution::Parallel);

// |B_weyl - B_uv| everywhere; on solitons also |B_d - B_weyl|, |D_conformal - D_soliton|
// and |U_onsoliton - U_direct|.
std::vector<PointwiseCheck> route_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                         Execution exec = Execution::Parallel);

// Soliton equation, normalization and the derived identities.
PointwiseCheck soliton_identity_check(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                      Execution exec = Execution::Parallel);

// tr U + Delta R and tr V - 3 Delta R, plus tr B.
std::vector<PointwiseCheck> trace_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                         Execution exec = Execution::Parallel);

// div U and div V from degree-5 jets.
std::vector<PointwiseCheck> divergence_checks(const SolitonModel& model, const std::vector<ChartPoint>& points,
                                              Execution exec = Execution::Parallel);

// All of the above with `count` random points (grid for torus divergences).
std::vector<PointwiseCheck> pointwise_suite(const SolitonModel& model, int count, std::uint64_t seed,
                                            Execution exec = Execution::Parallel);

}  // namespace shrinker

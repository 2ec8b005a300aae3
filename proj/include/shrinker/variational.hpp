#pragma once

// Quadratic curvature functionals F = -alpha int |W|^2 + (alpha/3 - beta)/2 int R^2,
// their finite-difference variations, and the TT spectral stability test.

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shrinker/catalog.hpp"
#include "shrinker/integrals.hpp"

namespace shrinker {

struct FourierMode {
  enum class Phase { Cos, Sin };
  std::array<int, kDim> k{};
  Mat<double> amplitude;  // symmetric
  Phase phase = Phase::Cos;
};

// Symmetric 2-tensor field on the flat torus, sum of A cos(k.x) / A sin(k.x).
class PerturbationField {
 public:
  // Throws InputError for a non-symmetric amplitude.
  explicit PerturbationField(std::vector<FourierMode> modes);

  const std::vector<FourierMode>& modes() const { return modes_; }
  // A k = 0 and tr A = 0 for every mode, tested exactly.
  bool is_tt() const { return tt_; }
  // Chart axes with a nonzero wavevector component.
  std::vector<int> active_axes() const;
  std::shared_ptr<const SymmetricField> field() const { return field_; }
  // int |h|^2 over the flat torus of side 2 pi, from mode orthogonality.
  double flat_l2_mass() const;
  // sum over modes of |k|^4 times the L^2 mass of the mode (= int |Delta h|^2).
  double flat_biharmonic_mass() const;

 private:
  std::vector<FourierMode> modes_;
  bool tt_ = false;
  std::shared_ptr<const SymmetricField> field_;
};

// diag(0, 1, -1, 0) cos x^0 scaled by `scale`: the documented TT mode.
PerturbationField documented_tt_mode(double scale = 1.0);
// Random symmetric (not TT) modes with wavevectors in the (x^0, x^1) plane and dyadic amplitudes.
PerturbationField random_perturbation(std::uint64_t seed, int modes = 3);

// Metric variation direction on the torus chart.
struct Direction {
  std::string name;
  std::shared_ptr<const SymmetricField> field;
  std::vector<int> active_axes;
};

Direction as_direction(const PerturbationField& h, const std::string& name = "fourier");
// h = 2 psi e^{2 phi} delta with psi = b sin^2 x^0 sin^2 x^1: the derivative of
// a second conformal bump on top of the conformal torus.
Direction conformal_bump_direction(const SolitonModel& base, double b = 0.05);

struct FunctionalValue {
  double F = 0.0;
  double W2 = 0.0;  // int |W|^2 dV
  double R2 = 0.0;  // int R^2 dV
};

double functional_combine(const ParameterPair& p, double W2, double R2);

// Compact catalog models only; non-compact ones have no unweighted functional.
FunctionalValue functional_eval(const ParameterPair& p, const SolitonModel& model, const QuadratureSpec& quad);
// Metric on the torus chart that depends only on `active_axes`; periodic
// trapezoid on those axes.  Throws DomainError if g is not positive definite.
FunctionalValue functional_eval(const ParameterPair& p, const SymmetricField& metric,
                                const std::vector<int>& active_axes, const QuadratureSpec& quad);

inline const std::vector<double> kDefaultSteps = {1e-3, 5e-4};
inline constexpr double kVariationTolerance = 1e-4;

struct FiniteDifferenceReport {
  std::string functional;
  std::string direction;
  ParameterPair params;
  std::vector<double> steps;           // accepted steps
  std::vector<double> rejected_steps;  // g + t h not positive definite
  std::vector<double> differences;     // one central difference per accepted step
  double extrapolated = 0.0;           // Richardson value
  double predicted = 0.0;
  // |extrapolated - predicted| / max(|extrapolated|, |predicted|, 1e-12, round-off level of the quotient)
  double mismatch = 0.0;
  double tolerance = kVariationTolerance;
  bool pass = false;
  std::string note;
};

// Central differences of t -> F(g + t h) at t = 0 against int <alpha U + beta V, h> dV_g.
FiniteDifferenceReport first_variation_check(const ParameterPair& p, const SolitonModel& base, const Direction& h,
                                             const QuadratureSpec& quad,
                                             const std::vector<double>& steps = kDefaultSteps);

// int <T, h> dV_g for T = alpha U + beta V.
double gradient_pairing(const ParameterPair& p, const SymmetricField& metric, const Direction& h,
                        const std::vector<int>& active_axes, const QuadratureSpec& quad);

struct SecondVariationR2 {
  double form = 0.0;
  std::optional<double> fd;  // flat torus only
  std::string note;
};

// Quadratic form of the second variation of int R^2 in TT gauge.  Rejects non-TT h.
SecondVariationR2 second_variation_R2(const SolitonModel& model, const PerturbationField& h,
                                      const QuadratureSpec& quad);

// Compares alpha int |Delta h|^2 with the second central difference of
// t -> F(g_flat + t h).
FiniteDifferenceReport flat_second_variation_check(double alpha, const PerturbationField& h,
                                                   const QuadratureSpec& quad, double beta = 0.0,
                                                   const std::vector<double>& steps = kDefaultSteps);

// Ratio of the derivative of int |W|^2 to int <B, h> dV on a metric with
// nonzero Bach tensor.
struct WeylGradientReport {
  double fd = 0.0;
  double bach_pairing = 0.0;
  double ratio = 0.0;
};

WeylGradientReport weyl_gradient_diagnostic(const QuadratureSpec& quad);

struct SpectralPolynomial {
  double alpha = 0.0, beta = 0.0, R = 0.0;
  double a2 = 0.0, a1 = 0.0, a0 = 0.0;
  double operator()(double mu) const { return (a2 * mu + a1) * mu + a0; }
  // Real roots in increasing order.
  std::vector<double> roots() const;
};

SpectralPolynomial spectral_polynomial(double alpha, double beta, double R);

// Constant coefficient obtained by composing B' = (Delta_L - R/3)(Delta_L - R/6)/2
// with the two candidate forms of V'.
struct SpectralConsistency {
  double printed_a0 = 0.0;
  double a0_displayed_vprime = 0.0;  // V' = R Delta_L h / 2
  double a0_full_vprime = 0.0;       // V' = R Delta_L h / 2 - R^2 h / 4
  double a1_composed = 0.0;
  double discrepancy = 0.0;          // printed_a0 - a0_displayed_vprime
};

SpectralConsistency spectral_consistency(double alpha, double beta, double R);

struct StabilityVerdict {
  double mu0 = 0.0;
  double infimum = 0.0;  // may be -infinity
  double argmin = 0.0;   // +infinity when the infimum is approached at infinity
  bool positive = false;
};

StabilityVerdict stability_verdict(const SpectralPolynomial& p, double mu0);

struct StabilityEntry {
  ParameterPair params;
  double R = 0.0;
  StabilityVerdict verdict;
};

std::vector<StabilityEntry> stability_scan(double mu0, double R, const std::vector<ParameterPair>& grid,
                                           Execution exec = Execution::Parallel);

}  // namespace shrinker

#pragma once

// Brute-force cross-checks: truncated Fock-space operator algebra, the
// smoothed-pulse limit of the Dirac closed form, and Monte-Carlo estimates of
// the coincidence weights.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gupchain/lattice.hpp"
#include "gupchain/magnus.hpp"
#include "gupchain/pulsed.hpp"

namespace gupchain {

/// Matrix truncation of the oscillator Hilbert space. Identities are only
/// asserted on the leading inner_block x inner_block corner, where products
/// of up to a few ladder operators are unaffected by the cut.
struct FockTruncation {
  std::size_t dimension = 40;
  std::size_t inner_block = 20;

  void validate() const;
};

/// Dimensionless quadratures (hbar = m = 1) and their free rotation by the
/// angle omega * t.
struct FockOperators {
  Eigen::MatrixXcd q;
  Eigen::MatrixXcd p;
  double omega = 1.0;

  [[nodiscard]] Eigen::MatrixXcd q_at(double t) const;
  [[nodiscard]] Eigen::MatrixXcd p_at(double t) const;
};

FockOperators fock_operators(const FockTruncation& trunc, double omega);

/// Largest inner-block deviation of
///   [q(t1), q(t2)] = i sin(omega (t2 - t1))  and
///   [q(t1), p(t2)^n] = n i p(t2)^(n-1) cos(omega (t2 - t1)).
double check_commutator_identities(const FockTruncation& trunc, double omega, double t1, double t2, int n);

struct NestedCommutatorCheck {
  /// 8 beta [prod_{j<=4} g_j cos(w(t5 - tj)) - prod_{j in 1,2,3,5} g_j cos(w(t4 - tj))].
  double analytic = 0.0;
  /// Inner-block max deviation of the matrix nested commutator from
  /// analytic * I, relative to |analytic| (absolute when analytic == 0).
  double relative_deviation = 0.0;
  /// Same, using the odd-in-beta part (M(beta) - M(-beta)) / 2, which removes
  /// the O(beta^2) residue.
  double linear_relative_deviation = 0.0;
  /// Inner-block max |entry| of the matrix nested commutator.
  double matrix_scale = 0.0;
};

/// [H(t1), [H(t2), [H(t3), [H(t4), H(t5)]]]] for H(t) = g(t) q(t) + (beta/3) p(t)^4
/// with the photon number set to 1. The swap term needs g at t5, so all five
/// coupling values are taken.
NestedCommutatorCheck check_nested_commutator(const FockTruncation& trunc, double omega,
                                              const std::array<double, 5>& times, const std::array<double, 5>& g,
                                              double beta);

struct BetaScaling {
  double value_beta = 0.0;     // inner-block Frobenius norm at beta
  double value_2beta = 0.0;    // same at 2 beta
  std::optional<double> ratio; // empty when value_beta is below the noise floor
};

struct DroppedTermCheck {
  /// [[H5, H1], [H4, [H2, H3]]], expected to scale as beta^2.
  BetaScaling dropped;
  /// [H5, [H4, [H3, [H2, H1]]]], expected to scale as beta.
  BetaScaling kept;
};

DroppedTermCheck check_dropped_terms_quadratic(const FockTruncation& trunc, double omega,
                                               const std::array<double, 5>& times,
                                               const std::array<double, 5>& g, double beta);

struct SmoothingReport {
  double reference = 0.0;
  std::vector<double> sigmas;
  std::vector<double> phis;
  std::vector<double> abs_errors;
  std::vector<double> rel_errors;  // absolute when the reference is 0
  bool strictly_decreasing = false;
  /// First-order extrapolation sigma -> 0 from the last two widths, with its
  /// error against the reference. The Gaussian-smoothed phase approaches the
  /// delta limit linearly in sigma.
  std::optional<double> extrapolated;
  std::optional<double> extrapolated_rel_error;
};

/// Runs magnus5_quadrature on Gaussian trains of decreasing width at the
/// schedule's pulse times and compares with `reference`. Widths must be
/// descending with the largest at most T/10.
SmoothingReport smoothed_pulse_limit(double reference, const ChainSpec& spec, const NormalModes& modes,
                                     const PulseSchedule& schedule, const std::vector<double>& sigmas,
                                     const QuadraturePlan& plan = {});

inline constexpr std::uint64_t kCoincidenceSeed = 20240611;
inline constexpr std::size_t kCoincidenceSamples = 1'000'000;

struct CoincidenceEstimate {
  double fraction = 0.0;  // Monte-Carlo estimate
  double expected = 0.0;  // simplex_fraction_weight of the same chain
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// chain[0] is the fixed upper limit; every other slot is jittered i.i.d.
/// around its listed centre and the fraction of strictly decreasing draws is
/// counted.
CoincidenceEstimate coincidence_weight_oracle(const std::vector<double>& chain,
                                              std::size_t samples = kCoincidenceSamples,
                                              std::uint64_t seed = kCoincidenceSeed);

}  // namespace gupchain

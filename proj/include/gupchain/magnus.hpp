#pragma once

// Magnus-expansion phase engines for arbitrary couplings: the quadratic
// (standard) phase F(t) and the fifth-order deformed-commutator phase.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "gupchain/coupling.hpp"
#include "gupchain/lattice.hpp"

namespace gupchain {

/// One of the four fifth-order nested-commutator orderings that survive at
/// first order in beta. `sigma` is 1-based: sigma[s - 1] = sigma(s).
struct PermutationEntry {
  std::array<int, 5> sigma;
  double coefficient;
};

using PermutationTable = std::array<PermutationEntry, 4>;

const PermutationTable& permutation_table() noexcept;

struct QuadraturePlan {
  /// Gauss–Legendre nodes per panel and level.
  int order = 24;
  /// Restrict coupling integrals to the coupling's active segments.
  bool windowed = true;
  /// Also evaluate at 2*order and report the difference as the error.
  bool richardson = true;

  void validate() const;
};

enum class PhaseMethod { closed_form, quadrature };

std::string_view to_string(PhaseMethod method) noexcept;

/// Optical phase coefficients with hbar, beta, m and the photon number
/// factored out. For pulse trains the quartic coefficient is Phi, defined by
///   Theta5 = (-i/hbar) (4!/3) (beta/m) (a^dag a)^4 (lambda^4 / 30) Phi.
struct PhaseResult {
  std::optional<double> quadratic_coefficient;
  std::optional<double> quartic_coefficient;
  /// sum_sigma lambda_sigma * simplex integral, before dividing out
  /// lambda^4 / 30.
  std::optional<double> raw_quartic_coefficient;
  double evaluation_time = 0.0;
  PhaseMethod method = PhaseMethod::quadrature;
  double error_estimate = 0.0;
};

/// F(t) = (1/2) int_0^t (g' G'' - g'' G') for a single-site coupling, with
/// g' = g cos(omega t) and g'' = g sin(omega t).
PhaseResult quadratic_phase(const CouplingFunction& g, double omega, double t, const QuadraturePlan& plan = {});

/// Delta-pulse limit of quadratic_phase: -(lambda^2/2) sum_{i>j} sin(omega (tau_i - tau_j)).
double quadratic_phase_dirac(double omega, std::span<const double> pulse_times, double strength);

/// Summand of the fifth-order term at one point of the ordered simplex
/// t1 >= ... >= t5, for permutation `entry` (without its coefficient):
///   sum_j [prod_{s<=4} D_j(t_sigma(s), t_sigma(5)) - (t_sigma(4) <-> t_sigma(5))].
double magnus5_term(const NormalModes& modes, const CouplingFunction& g, const PermutationEntry& entry,
                    const std::array<double, 5>& times);

/// sum over the table of coefficient * magnus5_term.
double magnus5_integrand(const NormalModes& modes, const CouplingFunction& g, const std::array<double, 5>& times);

/// Theta5 coefficient for an arbitrary smooth coupling.
///
/// The four coupling-carrying times of every term see the same one-variable
/// factor D_j(., s) of the remaining free time s, so the ordered-simplex
/// integral collapses to a single integral over s of products of
///   A_j(s) = int_s^t D_j(x, s) dx  and  B_j(s) = int_0^s D_j(x, s) dx
/// with factorial weights. Both levels use composite Gauss–Legendre. The
/// lower limit is 0, or the start of g's support if that is earlier.
PhaseResult magnus5_quadrature(const ChainSpec& spec, const NormalModes& modes, const CouplingFunction& g,
                               double t, const QuadraturePlan& plan = {});

/// Literal five-level iterated Gauss–Legendre over the ordered simplex.
/// Cost grows as (panels * order)^5; meant for smooth, wide couplings when
/// cross-checking magnus5_quadrature.
double magnus5_nested(const NormalModes& modes, const CouplingFunction& g, double t, int order);

}  // namespace gupchain

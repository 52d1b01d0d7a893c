#pragma once

// Exact fifth-order phase for trains of Dirac pulses: every ordered-simplex
// integral collapses to signed one-dimensional intervals gated by Heaviside
// chains, and each interval integral of a product of four cosines has a
// closed form.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gupchain/coupling.hpp"
#include "gupchain/lattice.hpp"
#include "gupchain/magnus.hpp"

namespace gupchain {

inline constexpr std::size_t kPulsesPerSite = 4;

/// Four pulses per site: site i (0-based) is hit at t0 + a T + i tau for
/// a = 0..3.
struct PulseSchedule {
  std::size_t n_sites = 1;
  double t0 = 0.0;
  double period = 1.0;      // T
  double site_delay = 0.0;  // tau
  double strength = 1.0;    // lambda, area of each delta
  double eval_time = 0.0;

  /// Builds and validates (T > 0, tau >= 0, lambda >= 0, T >= N tau,
  /// eval_time after the last pulse). Throws ConfigError.
  static PulseSchedule make(std::size_t n_sites, double t0, double period, double site_delay, double strength,
                            double eval_time);

  void validate() const;
  [[nodiscard]] double last_pulse_time() const noexcept;
  /// All 4N pulse times ordered by (site, pulse index).
  [[nodiscard]] std::vector<double> all_times() const;
};

double pulse_times(const PulseSchedule& schedule, std::size_t site, std::size_t pulse_index);

/// One trap period after the last pulse.
double default_eval_time(double last_pulse, double trap_freq);

/// Rules for building a schedule per chain length; unset fields follow the
/// quarter-period protocol T = pi/(2 Omega), tau = T/(2N),
/// eval = last pulse + 2 pi/Omega.
struct ScheduleTemplate {
  double t0 = 0.0;
  double strength = 1.0;
  std::optional<double> period;
  std::optional<double> site_delay;
  std::optional<double> eval_time;

  [[nodiscard]] PulseSchedule instantiate(std::size_t n_sites, double trap_freq) const;
};

/// w * int_a^b; orientation matters.
struct OrientedInterval {
  double weight = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Signed, weighted union of oriented intervals.
class IntervalSum {
 public:
  void add(double weight, double a, double b);
  [[nodiscard]] const std::vector<OrientedInterval>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

  /// Combines terms with identical endpoints and drops zero-weight or
  /// zero-length ones.
  void compact();

  /// sum_k w_k * integral(a_k, b_k).
  template <class Integral>
  [[nodiscard]] double evaluate(Integral&& integral) const {
    double total = 0.0;
    for (const auto& term : terms_) total += term.weight * integral(term.a, term.b);
    return total;
  }

 private:
  std::vector<OrientedInterval> terms_;
};

/// Fraction of jittered orderings consistent with `chain` being strictly
/// decreasing, in the limit of vanishing jitter. chain[0] is the fixed upper
/// limit; chain[1..] are pulse times. Each block of m coincident pulse times
/// contributes 1/m!; a block of m-1 pulses tied with the upper limit
/// contributes 1/((m-1)! 2^(m-1)). Ties are decided with a relative
/// tolerance of 1e-12 of the largest magnitude in the chain.
double simplex_fraction_weight(std::span<const double> chain);

/// The four Heaviside-gated interval groups for pulse times theta (the
/// times attached to t_sigma(1..4)) and evaluation time t.
IntervalSum heaviside_decomposition(const std::array<double, 4>& theta, double t);

/// int_a^b prod_s cos(freqs[s] (theta[s] - u)) du, exactly.
double trig_product_integral(const std::array<double, 4>& freqs, const std::array<double, 4>& theta, double a,
                             double b);

/// Phi for a single oscillator hit by four deltas.
double phi_single(double omega, const std::array<double, 4>& pulse_times, double t);

enum class ChainPath {
  /// Direct 9-index sum over (i1..i4, j, nu1..nu4, alpha1..alpha4).
  naive,
  /// Precomputes W[nu] = sum_j prod_s O'_{j nu_s} and evaluates each pulse
  /// tuple's intervals once.
  factored,
};

/// Phi(N) for a chain under a Dirac pulse schedule. `workers` = 0 picks the
/// hardware concurrency; the result does not depend on it.
PhaseResult phi_chain(const ChainSpec& spec, const NormalModes& modes, const PulseSchedule& schedule,
                      ChainPath path = ChainPath::factored, unsigned workers = 0);

/// Smoothed counterpart of a schedule: Gaussian pulses of width sigma at
/// every pulse time, with area lambda.
CouplingFunction gaussian_train_for(const PulseSchedule& schedule, double sigma);

struct ScalingFit {
  double slope = 0.0;
  double residual = 0.0;  // sum of squared log residuals
  std::size_t points = 0;
};

/// Ordinary least squares of log|phi| against log n. Throws ConfigError for
/// fewer than two rows or a non-positive |phi|.
ScalingFit fit_scaling_exponent(std::span<const std::pair<double, double>> rows);

struct ScanRow {
  std::size_t n = 0;
  double omega_c = 0.0;  // rad/s
  std::optional<double> phi;
  double n_times_phi1 = 0.0;  // N |Phi(1)|
  double eval_time = 0.0;
  std::string error;
};

struct ScanFit {
  double omega_c = 0.0;
  std::optional<ScalingFit> fit;
};

struct ScanResult {
  std::vector<ScanRow> rows;  // grouped by omega_c, sorted by n
  std::vector<ScanFit> fits;
};

/// Phi(N) for N in [n_min, n_max] and each coupling frequency (rad/s).
/// Failed rows carry their error message and are left out of the fit.
ScanResult scan_lattice(const ChainSpec& spec_template, const ScheduleTemplate& schedule_template, std::size_t n_min,
                        std::size_t n_max, std::span<const double> omega_c_list, unsigned workers = 0);

}  // namespace gupchain

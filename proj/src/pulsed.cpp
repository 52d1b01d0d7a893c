#include "gupchain/pulsed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "gupchain/errors.hpp"
#include "gupchain/summation.hpp"

namespace gupchain {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kResonanceTolerance = 1e-12;
constexpr double kReinjectionSlack = 1e-12;

// Term arithmetic runs in extended precision. Chain sums cancel by up to
// five orders of magnitude, which would otherwise expose per-term rounding.
using wide = long double;

wide sinc(wide x) {
  if (std::abs(x) < 1e-4L) {
    const wide x2 = x * x;
    return 1.0L - x2 / 6.0L + x2 * x2 / 120.0L;
  }
  return std::sin(x) / x;
}

// Narrows without loss: the low word carries what the double drops.
void add_wide(PairwiseSum& sum, wide value) {
  const double hi = static_cast<double>(value);
  sum.add(hi);
  sum.add(static_cast<double>(value - hi));
}

wide trig_integral_wide(const std::array<double, 4>& freqs, const std::array<double, 4>& theta, double a,
                        double b) {
  const wide half = 0.5L * (static_cast<wide>(b) - a);
  const wide mid = 0.5L * (static_cast<wide>(a) + b);
  double max_freq = 0.0;
  std::array<wide, 4> x{};
  for (std::size_t s = 0; s < 4; ++s) {
    max_freq = std::max(max_freq, std::abs(freqs[s]));
    x[s] = freqs[s] * (theta[s] - mid);
  }
  const double resonance = kResonanceTolerance * max_freq;
  // prod cos(x_s) = 1/8 sum over sign patterns of cos(x_1 +- x_2 +- x_3 +- x_4).
  wide sum = 0.0L;
  for (int mask = 0; mask < 8; ++mask) {
    const wide e2 = (mask & 1) ? -1.0L : 1.0L;
    const wide e3 = (mask & 2) ? -1.0L : 1.0L;
    const wide e4 = (mask & 4) ? -1.0L : 1.0L;
    const wide arg = x[0] + e2 * x[1] + e3 * x[2] + e4 * x[3];
    const wide lambda = freqs[0] + e2 * freqs[1] + e3 * freqs[2] + e4 * freqs[3];
    const wide shape = std::abs(lambda) <= resonance ? 1.0L : sinc(lambda * half);
    sum += std::cos(arg) * shape;
  }
  return 2.0L * half * sum / 8.0L;
}

wide intervals_integral(const IntervalSum& intervals, const std::array<double, 4>& freqs,
                        const std::array<double, 4>& theta) {
  wide total = 0.0L;
  for (const auto& term : intervals.terms()) total += term.weight * trig_integral_wide(freqs, theta, term.a, term.b);
  return total;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) r *= base;
  return r;
}

// Pulse times in units of 1/Omega, ordered by (site, pulse index).
std::vector<double> scaled_pulse_times(const PulseSchedule& schedule, double omega) {
  std::vector<double> out;
  out.reserve(schedule.n_sites * kPulsesPerSite);
  for (std::size_t i = 0; i < schedule.n_sites; ++i) {
    for (std::size_t a = 0; a < kPulsesPerSite; ++a) out.push_back(omega * pulse_times(schedule, i, a));
  }
  return out;
}

// Closed-form interval integral with the oscillating factors precomputed as
// unit phasors e^{i freq (theta_s - mid)}.
struct PhasorInterval {
  double weight;
  wide half;
  // phasor[s * n_modes + k]
  std::vector<std::complex<wide>> phasor;
};

wide phasor_integral(const PhasorInterval& iv, const std::array<std::size_t, 4>& nu,
                     std::span<const double> freqs, std::size_t n_modes, double resonance) {
  const auto& e0 = iv.phasor[nu[0]];
  const auto& e1 = iv.phasor[n_modes + nu[1]];
  const auto& e2 = iv.phasor[2 * n_modes + nu[2]];
  const auto& e3 = iv.phasor[3 * n_modes + nu[3]];
  // Re(a b) and Re(a conj(b)) cover every sign pattern of the last pair.
  const std::array<std::complex<wide>, 2> head{e0 * e1, e0 * std::conj(e1)};
  const std::array<std::complex<wide>, 2> tail{e2 * e3, e2 * std::conj(e3)};
  const std::array<wide, 2> f_head{static_cast<wide>(freqs[nu[0]]) + freqs[nu[1]],
                                   static_cast<wide>(freqs[nu[0]]) - freqs[nu[1]]};
  const std::array<wide, 2> f_tail{static_cast<wide>(freqs[nu[2]]) + freqs[nu[3]],
                                   static_cast<wide>(freqs[nu[2]]) - freqs[nu[3]]};
  wide sum = 0.0L;
  for (std::size_t h = 0; h < 2; ++h) {
    for (std::size_t t = 0; t < 2; ++t) {
      const wide rr = head[h].real() * tail[t].real();
      const wide ii = head[h].imag() * tail[t].imag();
      // Same sign on the tail pair, then the tail pair negated.
      const wide plus = f_head[h] + f_tail[t];
      const wide minus = f_head[h] - f_tail[t];
      sum += (rr - ii) * (std::abs(plus) < resonance ? 1.0L : sinc(plus * iv.half));
      sum += (rr + ii) * (std::abs(minus) < resonance ? 1.0L : sinc(minus * iv.half));
    }
  }
  return iv.weight * 2.0L * iv.half * sum / 8.0L;
}

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw NumericalFailure(std::string("non-finite intermediate in ") + what);
}

struct ChainInputs {
  std::size_t n = 0;
  double t = 0.0;                // scaled evaluation time
  std::vector<double> theta;     // scaled pulse times, (site, alpha)
  std::vector<double> freqs;     // omega_k / Omega
  Eigen::MatrixXd o;
  Eigen::MatrixXd o_prime;
  double resonance = 0.0;
};

double chain_naive(const ChainInputs& in) {
  const std::size_t n = in.n;
  PairwiseSum sum;
  std::array<std::size_t, 4> i{};
  std::array<std::size_t, 4> nu{};
  std::array<std::size_t, 4> alpha{};
  const std::size_t n4 = ipow(n, 4);
  for (std::size_t ii = 0; ii < n4; ++ii) {
    for (std::size_t s = 0, r = ii; s < 4; ++s, r /= n) i[3 - s] = r % n;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t nn = 0; nn < n4; ++nn) {
        for (std::size_t s = 0, r = nn; s < 4; ++s, r /= n) nu[3 - s] = r % n;
        wide coef = 1.0L;
        std::array<double, 4> freq{};
        for (std::size_t s = 0; s < 4; ++s) {
          const auto a = static_cast<Eigen::Index>(i[s]);
          const auto b = static_cast<Eigen::Index>(nu[s]);
          coef *= static_cast<wide>(in.o(a, b)) * in.o_prime(static_cast<Eigen::Index>(j), b);
          freq[s] = in.freqs[nu[s]];
        }
        for (std::size_t aa = 0; aa < 256; ++aa) {
          for (std::size_t s = 0, r = aa; s < 4; ++s, r /= 4) alpha[3 - s] = r % 4;
          std::array<double, 4> theta{};
          for (std::size_t s = 0; s < 4; ++s) theta[s] = in.theta[i[s] * kPulsesPerSite + alpha[s]];
          const IntervalSum intervals = heaviside_decomposition(theta, in.t);
          if (intervals.empty()) continue;
          const wide term = coef * intervals_integral(intervals, freq, theta);
          check_finite(static_cast<double>(term), "naive chain sum");
          add_wide(sum, term);
        }
      }
    }
  }
  return sum.value();
}

// Sum over one block of leading site pairs (i1, i2).
double chain_factored_block(const ChainInputs& in, std::size_t i1, std::size_t i2, const std::vector<wide>& w,
                            double& abs_sum) {
  const std::size_t n = in.n;
  const std::size_t n4 = ipow(n, 4);
  PairwiseSum sum;
  std::vector<wide> coef(n4);
  std::vector<std::size_t> live;
  std::vector<std::array<std::size_t, 4>> nu_of(n4);
  for (std::size_t nn = 0; nn < n4; ++nn) {
    for (std::size_t s = 0, r = nn; s < 4; ++s, r /= n) nu_of[nn][3 - s] = r % n;
  }
  std::vector<PhasorInterval> intervals;

  for (std::size_t i3 = 0; i3 < n; ++i3) {
    for (std::size_t i4 = 0; i4 < n; ++i4) {
      const std::array<std::size_t, 4> i{i1, i2, i3, i4};
      live.clear();
      for (std::size_t nn = 0; nn < n4; ++nn) {
        wide c = w[nn];
        for (std::size_t s = 0; s < 4; ++s) {
          c *= in.o(static_cast<Eigen::Index>(i[s]), static_cast<Eigen::Index>(nu_of[nn][s]));
        }
        coef[nn] = c;
        if (c != 0.0) live.push_back(nn);
      }
      if (live.empty()) continue;

      for (std::size_t aa = 0; aa < 256; ++aa) {
        std::array<double, 4> theta{};
        for (std::size_t s = 0, r = aa; s < 4; ++s, r /= 4) {
          theta[3 - s] = in.theta[i[3 - s] * kPulsesPerSite + r % 4];
        }
        IntervalSum isum = heaviside_decomposition(theta, in.t);
        isum.compact();
        if (isum.empty()) continue;

        // Each distinct interval is integrated once per mode tuple.
        intervals.clear();
        for (const auto& term : isum.terms()) {
          PhasorInterval iv{term.weight, 0.5L * (static_cast<wide>(term.b) - term.a),
                            std::vector<std::complex<wide>>(4 * n)};
          const wide mid = 0.5L * (static_cast<wide>(term.a) + term.b);
          for (std::size_t s = 0; s < 4; ++s) {
            for (std::size_t k = 0; k < n; ++k) {
              iv.phasor[s * n + k] = std::polar(1.0L, in.freqs[k] * (theta[s] - mid));
            }
          }
          intervals.push_back(std::move(iv));
        }
        for (std::size_t nn : live) {
          wide value = 0.0L;
          for (const auto& iv : intervals) value += phasor_integral(iv, nu_of[nn], in.freqs, n, in.resonance);
          const wide term = coef[nn] * value;
          check_finite(static_cast<double>(term), "factored chain sum");
          add_wide(sum, term);
        }
      }
    }
  }
  abs_sum = sum.abs_sum();
  return sum.value();
}

double chain_factored(const ChainInputs& in, unsigned workers, double& abs_sum) {
  const std::size_t n = in.n;
  const std::size_t n4 = ipow(n, 4);
  std::vector<wide> w(n4, 0.0L);
  for (std::size_t nn = 0; nn < n4; ++nn) {
    std::array<std::size_t, 4> nu{};
    for (std::size_t s = 0, r = nn; s < 4; ++s, r /= n) nu[3 - s] = r % n;
    wide total = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      wide prod = 1.0L;
      for (std::size_t s = 0; s < 4; ++s) {
        prod *= in.o_prime(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(nu[s]));
      }
      total += prod;
    }
    w[nn] = total;
  }

  const std::size_t blocks = n * n;
  std::vector<double> partial(blocks, 0.0);
  std::vector<double> partial_abs(blocks, 0.0);
  std::vector<std::exception_ptr> failures(blocks);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      try {
        partial[b] = chain_factored_block(in, b / n, b % n, w, partial_abs[b]);
      } catch (...) {
        failures[b] = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(run);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  abs_sum = 0.0;
  for (double a : partial_abs) abs_sum += a;
  return pairwise_sum(partial);
}

}  // namespace

// ---------------------------------------------------------------------------
// Schedules

PulseSchedule PulseSchedule::make(std::size_t n_sites, double t0, double period, double site_delay, double strength,
                                  double eval_time) {
  PulseSchedule s{n_sites, t0, period, site_delay, strength, eval_time};
  s.validate();
  return s;
}

void PulseSchedule::validate() const {
  if (n_sites < 1) throw ConfigError("schedule needs at least one site");
  if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("pulse period T must be > 0");
  if (!(site_delay >= 0.0) || !std::isfinite(site_delay)) throw ConfigError("site delay tau must be >= 0");
  if (!(strength >= 0.0) || !std::isfinite(strength)) throw ConfigError("pulse strength must be >= 0");
  if (!std::isfinite(t0)) throw ConfigError("t0 must be finite");
  const double n = static_cast<double>(n_sites);
  if (period < n * site_delay * (1.0 - kReinjectionSlack)) {
    throw ConfigError("re-injection constraint violated: T = " + std::to_string(period) + " < N tau = " +
                      std::to_string(n * site_delay));
  }
  if (!(eval_time > last_pulse_time())) {
    throw ConfigError("evaluation time must be after the last pulse");
  }
}

double PulseSchedule::last_pulse_time() const noexcept {
  return t0 + 3.0 * period + static_cast<double>(n_sites - 1) * site_delay;
}

std::vector<double> PulseSchedule::all_times() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < n_sites; ++i)
    for (std::size_t a = 0; a < kPulsesPerSite; ++a) out.push_back(pulse_times(*this, i, a));
  return out;
}

double pulse_times(const PulseSchedule& schedule, std::size_t site, std::size_t pulse_index) {
  if (site >= schedule.n_sites) throw std::out_of_range("site index out of range");
  if (pulse_index >= kPulsesPerSite) throw std::out_of_range("pulse index out of range");
  return schedule.t0 + static_cast<double>(pulse_index) * schedule.period +
         static_cast<double>(site) * schedule.site_delay;
}

double default_eval_time(double last_pulse, double trap_freq) {
  return last_pulse + 2.0 * std::numbers::pi / trap_freq;
}

PulseSchedule ScheduleTemplate::instantiate(std::size_t n_sites, double trap_freq) const {
  if (!(trap_freq > 0.0)) throw ConfigError("trap frequency must be > 0");
  PulseSchedule s;
  s.n_sites = n_sites;
  s.t0 = t0;
  s.strength = strength;
  s.period = period.value_or(0.5 * std::numbers::pi / trap_freq);
  s.site_delay = site_delay.value_or(s.period / (2.0 * static_cast<double>(n_sites)));
  s.eval_time = eval_time.value_or(default_eval_time(s.last_pulse_time(), trap_freq));
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Interval algebra

void IntervalSum::add(double weight, double a, double b) { terms_.push_back({weight, a, b}); }

void IntervalSum::compact() {
  std::vector<OrientedInterval> merged;
  for (const auto& t : terms_) {
    if (t.weight == 0.0 || t.a == t.b) continue;
    auto it = std::find_if(merged.begin(), merged.end(), [&](const OrientedInterval& m) {
      return (m.a == t.a && m.b == t.b) || (m.a == t.b && m.b == t.a);
    });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->weight += (it->a == t.a) ? t.weight : -t.weight;
    }
  }
  std::erase_if(merged, [](const OrientedInterval& m) { return m.weight == 0.0; });
  terms_ = std::move(merged);
}

double simplex_fraction_weight(std::span<const double> chain) {
  if (chain.empty()) return 1.0;
  double scale = 0.0;
  for (double v : chain) scale = std::max(scale, std::abs(v));
  const double tol = kTieTolerance * scale;

  double weight = 1.0;
  std::size_t k = 0;
  while (k < chain.size()) {
    std::size_t end = k + 1;
    while (end < chain.size() && std::abs(chain[end] - chain[k]) <= tol) ++end;
    const std::size_t m = end - k;
    if (end < chain.size() && !(chain[end] < chain[k])) return 0.0;
    double fact = 1.0;
    if (k == 0) {
      // m - 1 pulses tied with the fixed upper limit: each lands below it with
      // probability 1/2, then they must come out in chain order.
      for (std::size_t q = 2; q < m; ++q) fact *= static_cast<double>(q);
      weight /= fact * std::ldexp(1.0, static_cast<int>(m - 1));
    } else {
      for (std::size_t q = 2; q <= m; ++q) fact *= static_cast<double>(q);
      weight /= fact;
    }
    k = end;
  }
  return weight;
}

IntervalSum heaviside_decomposition(const std::array<double, 4>& theta, double t) {
  const auto [t1, t2, t3, t4] = theta;
  IntervalSum out;
  if (const double w = simplex_fraction_weight(std::array{t, t4, t3, t2, t1}); w != 0.0) {
    out.add(w, t3, t4);
    out.add(-w, t4, t);
  }
  if (const double w = simplex_fraction_weight(std::array{t, t1, t4, t3, t2}); w != 0.0) {
    out.add(4.0 * w, t3, t4);
    out.add(-4.0 * w, t4, t1);
    out.add(-w, 0.0, t3);
  }
  if (const double w = simplex_fraction_weight(std::array{t, t1, t3, t2, t4}); w != 0.0) {
    out.add(w, t3, t1);
  }
  if (const double w = simplex_fraction_weight(std::array{t, t1, t3, t4, t2}); w != 0.0) {
    out.add(w, t3, t1);
  }
  return out;
}

double trig_product_integral(const std::array<double, 4>& freqs, const std::array<double, 4>& theta, double a,
                             double b) {
  return static_cast<double>(trig_integral_wide(freqs, theta, a, b));
}

double phi_single(double omega, const std::array<double, 4>& pulse_times, double t) {
  if (!(omega > 0.0)) throw ConfigError("trap frequency must be > 0");
  std::array<double, 4> scaled{};
  for (std::size_t k = 0; k < 4; ++k) scaled[k] = omega * pulse_times[k];
  const double t_scaled = omega * t;
  const std::array<double, 4> unit{1.0, 1.0, 1.0, 1.0};

  PairwiseSum sum;
  for (std::size_t aa = 0; aa < 256; ++aa) {
    std::array<double, 4> theta{};
    for (std::size_t s = 0, r = aa; s < 4; ++s, r /= 4) theta[3 - s] = scaled[r % 4];
    const IntervalSum intervals = heaviside_decomposition(theta, t_scaled);
    if (intervals.empty()) continue;
    add_wide(sum, intervals_integral(intervals, unit, theta));
  }
  return sum.value() / omega;
}

PhaseResult phi_chain(const ChainSpec& spec, const NormalModes& modes, const PulseSchedule& schedule, ChainPath path,
                      unsigned workers) {
  spec.validate();
  schedule.validate();
  if (schedule.n_sites != spec.n_sites || modes.size() != spec.n_sites) {
    throw ConfigError("schedule, chain and normal modes disagree on the number of sites");
  }
  const double omega = spec.trap_freq;

  ChainInputs in;
  in.n = spec.n_sites;
  in.t = omega * schedule.eval_time;
  in.theta = scaled_pulse_times(schedule, omega);
  in.freqs.resize(in.n);
  double max_freq = 0.0;
  for (std::size_t k = 0; k < in.n; ++k) {
    in.freqs[k] = modes.frequencies(static_cast<Eigen::Index>(k)) / omega;
    max_freq = std::max(max_freq, in.freqs[k]);
  }
  in.resonance = kResonanceTolerance * max_freq;
  in.o = modes.o_matrix;
  in.o_prime = modes.o_prime_matrix;

  double value = 0.0;
  double abs_sum = 0.0;
  if (path == ChainPath::naive) {
    value = chain_naive(in);
  } else {
    value = chain_factored(in, workers, abs_sum);
  }
  check_finite(value, "chain phase");

  PhaseResult result;
  result.quartic_coefficient = value / omega;
  const double lambda4 = std::pow(schedule.strength, 4);
  result.raw_quartic_coefficient = lambda4 / 30.0 * value / omega;
  result.evaluation_time = schedule.eval_time;
  result.method = PhaseMethod::closed_form;
  result.error_estimate = std::numeric_limits<double>::epsilon() * abs_sum / omega;
  return result;
}

CouplingFunction gaussian_train_for(const PulseSchedule& schedule, double sigma) {
  std::vector<std::vector<double>> centers(schedule.n_sites);
  for (std::size_t i = 0; i < schedule.n_sites; ++i) {
    for (std::size_t a = 0; a < kPulsesPerSite; ++a) centers[i].push_back(pulse_times(schedule, i, a));
  }
  return CouplingFunction::gaussian_train(std::move(centers), sigma, schedule.strength);
}

// ---------------------------------------------------------------------------
// Scaling scan

ScalingFit fit_scaling_exponent(std::span<const std::pair<double, double>> rows) {
  if (rows.size() < 2) throw ConfigError("scaling fit needs at least two rows");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [n, phi] : rows) {
    if (!(n > 0.0)) throw ConfigError("scaling fit needs positive N");
    if (!(std::abs(phi) > 0.0) || !std::isfinite(phi)) throw ConfigError("scaling fit undefined: |phi| must be > 0");
    x.push_back(std::log(n));
    y.push_back(std::log(std::abs(phi)));
  }
  const double count = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / count;
  const double my = pairwise_sum(y) / count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("scaling fit needs at least two distinct N");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.points = x.size();
  const double intercept = my - fit.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (intercept + fit.slope * x[k]);
    fit.residual += r * r;
  }
  return fit;
}

ScanResult scan_lattice(const ChainSpec& spec_template, const ScheduleTemplate& schedule_template, std::size_t n_min,
                        std::size_t n_max, std::span<const double> omega_c_list, unsigned workers) {
  if (n_min < 1 || n_max < n_min) throw ConfigError("scan range must satisfy 1 <= n_min <= n_max");
  if (omega_c_list.empty()) throw ConfigError("scan needs at least one coupling frequency");

  ScanResult result;
  for (double omega_c : omega_c_list) {
    ChainSpec single = spec_template;
    single.hessian.reset();
    single.n_sites = 1;
    single.coupling_freq = omega_c;
    const auto single_schedule = schedule_template.instantiate(1, single.trap_freq);
    const double phi1 =
        *phi_chain(single, normal_modes(single), single_schedule, ChainPath::factored, workers).quartic_coefficient;

    std::vector<std::pair<double, double>> points;
    for (std::size_t n = n_min; n <= n_max; ++n) {
      ScanRow row;
      row.n = n;
      row.omega_c = omega_c;
      row.n_times_phi1 = static_cast<double>(n) * std::abs(phi1);
      try {
        ChainSpec spec = spec_template;
        spec.hessian.reset();
        spec.n_sites = n;
        spec.coupling_freq = omega_c;
        const auto schedule = schedule_template.instantiate(n, spec.trap_freq);
        row.eval_time = schedule.eval_time;
        row.phi = phi_chain(spec, normal_modes(spec), schedule, ChainPath::factored, workers).quartic_coefficient;
        points.emplace_back(static_cast<double>(n), *row.phi);
      } catch (const Error& e) {
        row.error = e.what();
      }
      result.rows.push_back(std::move(row));
    }

    ScanFit fit{omega_c, std::nullopt};
    const bool fittable = points.size() >= 2 && std::all_of(points.begin(), points.end(), [](const auto& p) {
                            return std::abs(p.second) > 0.0;
                          });
    if (fittable) fit.fit = fit_scaling_exponent(points);
    result.fits.push_back(fit);
  }
  return result;
}

}  // namespace gupchain

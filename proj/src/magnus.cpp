#include "gupchain/magnus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gupchain/errors.hpp"
#include "gupchain/quadrature.hpp"
#include "gupchain/summation.hpp"

namespace gupchain {

namespace {

constexpr double kQuadraticTolerance = 1e-6;
constexpr double kQuarticTolerance = 1e-3;
// Differences below this fraction of the integrated |integrand| are rounding.
constexpr double kNoiseFloor = 1e-9;

void split_into(std::vector<Panel>& out, double a, double b, double max_width, bool active) {
  if (!(b > a)) return;
  const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  const double width = (b - a) / static_cast<double>(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    const double lo = a + static_cast<double>(k) * width;
    const double hi = (k + 1 == pieces) ? b : lo + width;
    out.push_back({lo, hi, active});
  }
}

// Integration starts at 0, or earlier when the coupling is already on before
// 0 (a pulse centred at 0 must be integrated whole to reach the delta limit).
double integration_origin(const CouplingFunction& g) { return std::min(0.0, g.support().begin); }

// Composite panels covering [origin, t_end]. Gaps between coupling segments
// are inactive unless `windowed` is false.
std::vector<Panel> build_panels(const CouplingFunction& g, double t_end, double gap_width, bool windowed) {
  std::vector<Panel> panels;
  const double origin = integration_origin(g);
  if (!(t_end > origin)) return panels;
  double cursor = origin;
  for (const auto& seg : g.segments()) {
    if (seg.begin >= t_end) break;
    const double a = std::max(seg.begin, origin);
    const double b = std::min(seg.end, t_end);
    if (!(b > a)) continue;
    split_into(panels, cursor, a, gap_width, !windowed);
    split_into(panels, a, b, std::min(seg.max_panel, gap_width), true);
    cursor = b;
  }
  split_into(panels, cursor, t_end, gap_width, !windowed);
  return panels;
}

double max_frequency(const NormalModes& modes) { return modes.frequencies.maxCoeff(); }

// Panel width that keeps the degree-4 trigonometric integrands to about a
// quarter period of the fastest mode.
double gap_panel_width(double max_freq) { return 0.5 * std::numbers::pi / max_freq; }

bool disagrees(double coarse, double fine, double abs_integral, double tolerance) {
  const double diff = std::abs(coarse - fine);
  const double scale = std::max(std::abs(fine), kNoiseFloor * abs_integral);
  return diff > tolerance * scale && diff > 0.0;
}

std::string describe_disagreement(const char* what, int order, double coarse, double fine) {
  std::ostringstream os;
  os.precision(17);
  os << what << " did not converge: order " << order << " gives " << coarse << ", order " << 2 * order
     << " gives " << fine;
  return os.str();
}

struct Integral {
  double value = 0.0;
  double abs_value = 0.0;
};

// Cumulative moments C_ik(s) = int_0^s g_i(x) (cos, sin)(omega_k x) dx for
// every site i and mode k, held panel by panel.
class MomentTable {
 public:
  MomentTable(const CouplingFunction& g, std::span<const double> freqs, const std::vector<Panel>& panels,
              const GaussLegendreRule& rule)
      : g_(g), freqs_(freqs.begin(), freqs.end()), rule_(rule), n_sites_(g.n_sites()), n_modes_(freqs.size()) {
    const std::size_t stride = 2 * n_sites_ * n_modes_;
    base_.assign((panels.size() + 1) * stride, 0.0);
    std::vector<double> local(stride);
    for (std::size_t p = 0; p < panels.size(); ++p) {
      std::fill(local.begin(), local.end(), 0.0);
      if (panels[p].active) accumulate(panels[p].begin, panels[p].end, local);
      for (std::size_t q = 0; q < stride; ++q) base_[(p + 1) * stride + q] = base_[p * stride + q] + local[q];
    }
    stride_ = stride;
  }

  // Moments at s inside panel p (begin <= s <= end).
  void at(std::size_t p, const Panel& panel, double s, std::vector<double>& out) const {
    out.assign(base_.begin() + static_cast<std::ptrdiff_t>(p * stride_),
               base_.begin() + static_cast<std::ptrdiff_t>((p + 1) * stride_));
    if (panel.active && s > panel.begin) {
      std::vector<double> local(stride_, 0.0);
      accumulate(panel.begin, s, local);
      for (std::size_t q = 0; q < stride_; ++q) out[q] += local[q];
    }
  }

  [[nodiscard]] std::span<const double> total() const {
    return {base_.data() + (base_.size() - stride_), stride_};
  }

  [[nodiscard]] std::size_t cos_index(std::size_t i, std::size_t k) const { return (i * n_modes_ + k) * 2; }

 private:
  void accumulate(double a, double b, std::vector<double>& local) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t n = 0; n < rule_.nodes.size(); ++n) {
      const double x = mid + half * rule_.nodes[n];
      const double w = half * rule_.weights[n];
      for (std::size_t i = 0; i < n_sites_; ++i) {
        const double gx = g_(i, x);
        if (gx == 0.0) continue;
        for (std::size_t k = 0; k < n_modes_; ++k) {
          const double phase = freqs_[k] * x;
          local[cos_index(i, k)] += w * gx * std::cos(phase);
          local[cos_index(i, k) + 1] += w * gx * std::sin(phase);
        }
      }
    }
  }

  const CouplingFunction& g_;
  std::vector<double> freqs_;
  const GaussLegendreRule& rule_;
  std::size_t n_sites_;
  std::size_t n_modes_;
  std::size_t stride_ = 0;
  std::vector<double> base_;
};

// Weight of A^(p-1) B^(5-p) for p = 1..5 after summing the table: the free
// time of the direct term sits at position sigma(5) of the ordered chain and
// the free time of the swapped term at sigma(4).
std::array<double, 5> position_weights() {
  std::array<double, 5> kappa{};
  for (const auto& entry : permutation_table()) {
    kappa[static_cast<std::size_t>(entry.sigma[4] - 1)] += entry.coefficient;
    kappa[static_cast<std::size_t>(entry.sigma[3] - 1)] -= entry.coefficient;
  }
  constexpr std::array<double, 5> factorial{1.0, 1.0, 2.0, 6.0, 24.0};
  for (std::size_t p = 0; p < 5; ++p) kappa[p] /= factorial[p] * factorial[4 - p];
  return kappa;
}

Integral magnus5_raw(const NormalModes& modes, const CouplingFunction& g, double t, int order, bool windowed) {
  const std::size_t n = modes.size();
  std::vector<double> freqs(n);
  for (std::size_t k = 0; k < n; ++k) freqs[k] = modes.frequencies(static_cast<Eigen::Index>(k));

  const auto panels = build_panels(g, t, gap_panel_width(max_frequency(modes)), windowed);
  const auto rule = gauss_legendre(order);
  const MomentTable moments(g, freqs, panels, rule);
  const auto total = moments.total();
  const auto kappa = position_weights();

  std::vector<double> weight(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) weight[(i * n + j) * n + k] = modes.kernel_weight(i, j, k);

  PairwiseSum sum;
  std::vector<double> local;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    const double half = 0.5 * (panel.end - panel.begin);
    const double mid = 0.5 * (panel.end + panel.begin);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = mid + half * rule.nodes[q];
      moments.at(p, panel, s, local);
      double integrand = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double below = 0.0;
        double above = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double c = std::cos(freqs[k] * s);
          const double sn = std::sin(freqs[k] * s);
          for (std::size_t i = 0; i < n; ++i) {
            const double w = weight[(i * n + j) * n + k];
            const std::size_t idx = moments.cos_index(i, k);
            below += w * (c * local[idx] + sn * local[idx + 1]);
            above += w * (c * (total[idx] - local[idx]) + sn * (total[idx + 1] - local[idx + 1]));
          }
        }
        double term = 0.0;
        double a_pow = 1.0;
        for (std::size_t pos = 0; pos < 5; ++pos) {
          term += kappa[pos] * a_pow * std::pow(below, static_cast<double>(4 - pos));
          a_pow *= above;
        }
        integrand += term;
      }
      sum.add(half * rule.weights[q] * integrand);
    }
  }
  return {sum.value(), sum.abs_sum()};
}

Integral quadratic_raw(const CouplingFunction& g, double omega, double t, int order, bool windowed) {
  const auto panels = build_panels(g, t, gap_panel_width(omega), windowed);
  const auto rule = gauss_legendre(order);
  const std::array<double, 1> freqs{omega};
  const MomentTable moments(g, freqs, panels, rule);
  PairwiseSum sum;
  std::vector<double> local;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    if (!panel.active) continue;
    const double half = 0.5 * (panel.end - panel.begin);
    const double mid = 0.5 * (panel.end + panel.begin);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = mid + half * rule.nodes[q];
      const double gs = g(0, s);
      if (gs == 0.0) continue;
      moments.at(p, panel, s, local);
      const double integrand = gs * (std::cos(omega * s) * local[1] - std::sin(omega * s) * local[0]);
      sum.add(0.5 * half * rule.weights[q] * integrand);
    }
  }
  return {sum.value(), sum.abs_sum()};
}

}  // namespace

const PermutationTable& permutation_table() noexcept {
  static const PermutationTable table{{
      {{5, 4, 3, 2, 1}, -1.0 / 30.0},
      {{1, 5, 4, 2, 3}, 2.0 / 15.0},
      {{1, 4, 3, 2, 5}, -1.0 / 30.0},
      {{1, 5, 3, 2, 4}, -1.0 / 30.0},
  }};
  return table;
}

void QuadraturePlan::validate() const {
  if (order < 4) throw ConfigError("quadrature order must be >= 4");
}

std::string_view to_string(PhaseMethod method) noexcept {
  switch (method) {
    case PhaseMethod::closed_form:
      return "closed-form";
    case PhaseMethod::quadrature:
      return "quadrature";
  }
  return "unknown";
}

PhaseResult quadratic_phase(const CouplingFunction& g, double omega, double t, const QuadraturePlan& plan) {
  plan.validate();
  if (g.n_sites() != 1) throw ConfigError("quadratic phase needs a single-site coupling");
  if (!(omega > 0.0)) throw ConfigError("trap frequency must be > 0");

  const Integral coarse = quadratic_raw(g, omega, t, plan.order, plan.windowed);
  PhaseResult result;
  result.evaluation_time = t;
  result.method = PhaseMethod::quadrature;
  result.quadratic_coefficient = coarse.value;
  if (plan.richardson) {
    const Integral fine = quadratic_raw(g, omega, t, 2 * plan.order, plan.windowed);
    if (disagrees(coarse.value, fine.value, fine.abs_value, kQuadraticTolerance)) {
      throw NumericalFailure(describe_disagreement("quadratic phase", plan.order, coarse.value, fine.value));
    }
    result.quadratic_coefficient = fine.value;
    result.error_estimate = std::abs(coarse.value - fine.value);
  }
  return result;
}

double quadratic_phase_dirac(double omega, std::span<const double> pulse_times, double strength) {
  double sum = 0.0;
  for (std::size_t a = 0; a < pulse_times.size(); ++a) {
    for (std::size_t b = 0; b < pulse_times.size(); ++b) {
      if (pulse_times[a] > pulse_times[b]) sum += std::sin(omega * (pulse_times[a] - pulse_times[b]));
    }
  }
  return -0.5 * strength * strength * sum;
}

double magnus5_term(const NormalModes& modes, const CouplingFunction& g, const PermutationEntry& entry,
                    const std::array<double, 5>& times) {
  const std::size_t n = modes.size();
  if (g.n_sites() != n) throw std::invalid_argument("coupling and modes disagree on the number of sites");
  auto at = [&](int slot) { return times[static_cast<std::size_t>(entry.sigma[static_cast<std::size_t>(slot)] - 1)]; };

  std::array<std::vector<double>, 5> g_values;
  for (int s = 0; s < 5; ++s) {
    g_values[static_cast<std::size_t>(s)].resize(n);
    for (std::size_t i = 0; i < n; ++i) g_values[static_cast<std::size_t>(s)][i] = g(i, at(s));
  }
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double direct = 1.0;
    for (int s = 0; s < 4; ++s) direct *= coupling_kernel(modes, g_values[static_cast<std::size_t>(s)], j, at(s), at(4));
    double swapped = 1.0;
    for (int s : {0, 1, 2, 4}) {
      swapped *= coupling_kernel(modes, g_values[static_cast<std::size_t>(s)], j, at(s), at(3));
    }
    total += direct - swapped;
  }
  return total;
}

double magnus5_integrand(const NormalModes& modes, const CouplingFunction& g, const std::array<double, 5>& times) {
  double sum = 0.0;
  for (const auto& entry : permutation_table()) sum += entry.coefficient * magnus5_term(modes, g, entry, times);
  return sum;
}

PhaseResult magnus5_quadrature(const ChainSpec& spec, const NormalModes& modes, const CouplingFunction& g,
                               double t, const QuadraturePlan& plan) {
  plan.validate();
  spec.validate();
  if (modes.size() != spec.n_sites || g.n_sites() != spec.n_sites) {
    throw ConfigError("chain, normal modes and coupling disagree on the number of sites");
  }

  const Integral coarse = magnus5_raw(modes, g, t, plan.order, plan.windowed);
  double raw = coarse.value;
  double error = 0.0;
  if (plan.richardson) {
    const Integral fine = magnus5_raw(modes, g, t, 2 * plan.order, plan.windowed);
    if (disagrees(coarse.value, fine.value, fine.abs_value, kQuarticTolerance)) {
      throw NumericalFailure(describe_disagreement("fifth-order quadrature", plan.order, coarse.value, fine.value));
    }
    raw = fine.value;
    error = std::abs(coarse.value - fine.value);
  }

  PhaseResult result;
  result.evaluation_time = t;
  result.method = PhaseMethod::quadrature;
  result.raw_quartic_coefficient = raw;
  const auto area = g.pulse_area();
  if (area && *area > 0.0) {
    const double scale = 30.0 / std::pow(*area, 4);
    result.quartic_coefficient = raw * scale;
    result.error_estimate = error * scale;
  } else {
    result.quartic_coefficient = raw;
    result.error_estimate = error;
  }
  return result;
}

double magnus5_nested(const NormalModes& modes, const CouplingFunction& g, double t, int order) {
  const auto rule = gauss_legendre(order);
  const double gap = gap_panel_width(max_frequency(modes));
  std::array<double, 5> times{};

  // Level `depth` integrates t_{depth+1} over [origin, upper].
  auto level = [&](auto&& self, std::size_t depth, double upper) -> double {
    PairwiseSum sum;
    for (const auto& panel : build_panels(g, upper, gap, false)) {
      const double half = 0.5 * (panel.end - panel.begin);
      const double mid = 0.5 * (panel.end + panel.begin);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        times[depth] = mid + half * rule.nodes[q];
        const double inner =
            depth == 4 ? magnus5_integrand(modes, g, times) : self(self, depth + 1, times[depth]);
        sum.add(half * rule.weights[q] * inner);
      }
    }
    return sum.value();
  };
  return level(level, 0, t);
}

}  // namespace gupchain

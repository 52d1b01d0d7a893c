#include "gupchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "gupchain/errors.hpp"

namespace gupchain {

namespace {

using Matrix = Eigen::MatrixXcd;
constexpr std::complex<double> kI{0.0, 1.0};

Matrix comm(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix power(const Matrix& m, int n) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < n; ++k) out = out * m;
  return out;
}

double inner_max_abs(const Matrix& m, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

double inner_norm(const Matrix& m, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return m.topLeftCorner(n, n).norm();
}

struct Hamiltonians {
  std::array<Matrix, 5> h;
};

// H(t_k) = g_k q(t_k) + (beta / 3) p(t_k)^4 with the photon number set to 1.
Hamiltonians interaction_hamiltonians(const FockOperators& ops, const std::array<double, 5>& times,
                                      const std::array<double, 5>& g, double beta) {
  Hamiltonians out;
  for (std::size_t k = 0; k < 5; ++k) {
    out.h[k] = g[k] * ops.q_at(times[k]) + (beta / 3.0) * power(ops.p_at(times[k]), 4);
  }
  return out;
}

Matrix nested_commutator(const FockOperators& ops, const std::array<double, 5>& times,
                         const std::array<double, 5>& g, double beta) {
  const auto [h] = interaction_hamiltonians(ops, times, g, beta);
  return comm(h[0], comm(h[1], comm(h[2], comm(h[3], h[4]))));
}

BetaScaling scaling(const FockTruncation& trunc, const FockOperators& ops, const std::array<double, 5>& times,
                    const std::array<double, 5>& g, double beta, bool dropped) {
  // Roundoff scale of the outermost products, restricted to the block that
  // is reported.
  const double eps = 4.0 * std::numeric_limits<double>::epsilon();
  const std::size_t d = trunc.inner_block;
  BetaScaling out;
  double noise = 0.0;
  for (const double b : {beta, 2.0 * beta}) {
    const auto [h] = interaction_hamiltonians(ops, times, g, b);
    Matrix value;
    if (dropped) {
      const Matrix left = comm(h[4], h[0]);
      const Matrix right = comm(h[3], comm(h[1], h[2]));
      value = comm(left, right);
      if (b == beta) noise = eps * inner_norm(left, d) * inner_norm(right, d);
    } else {
      const Matrix inner = comm(h[2], comm(h[1], h[0]));
      value = comm(h[4], comm(h[3], inner));
      if (b == beta) {
        noise = eps * inner_norm(h[4], d) * inner_norm(h[3], d) * inner_norm(inner, d);
      }
    }
    (b == beta ? out.value_beta : out.value_2beta) = inner_norm(value, trunc.inner_block);
  }
  if (out.value_beta > 100.0 * noise) out.ratio = out.value_2beta / out.value_beta;
  return out;
}

}  // namespace

void FockTruncation::validate() const {
  if (inner_block < 2 || inner_block > dimension) {
    throw ConfigError("Fock truncation needs 2 <= inner_block <= dimension");
  }
}

Eigen::MatrixXcd FockOperators::q_at(double t) const {
  const double angle = omega * t;
  return std::cos(angle) * q + std::sin(angle) * p;
}

Eigen::MatrixXcd FockOperators::p_at(double t) const {
  const double angle = omega * t;
  return std::cos(angle) * p - std::sin(angle) * q;
}

FockOperators fock_operators(const FockTruncation& trunc, double omega) {
  trunc.validate();
  if (!(omega > 0.0)) throw ConfigError("trap frequency must be > 0");
  const auto d = static_cast<Eigen::Index>(trunc.dimension);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Matrix ad = a.adjoint();
  FockOperators ops;
  ops.q = (a + ad) / std::numbers::sqrt2;
  ops.p = kI * (ad - a) / std::numbers::sqrt2;
  ops.omega = omega;
  return ops;
}

double check_commutator_identities(const FockTruncation& trunc, double omega, double t1, double t2, int n) {
  if (n < 1 || n > 4) throw ConfigError("commutator identity power must be in 1..4");
  const auto ops = fock_operators(trunc, omega);
  const auto dim = static_cast<Eigen::Index>(trunc.dimension);
  const Matrix identity = Matrix::Identity(dim, dim);
  const Matrix q1 = ops.q_at(t1);
  const Matrix q2 = ops.q_at(t2);
  const Matrix p2 = ops.p_at(t2);
  const double dt = omega * (t2 - t1);

  const Matrix qq = comm(q1, q2) - kI * std::sin(dt) * identity;
  const Matrix qp = comm(q1, power(p2, n)) - static_cast<double>(n) * kI * std::cos(dt) * power(p2, n - 1);
  return std::max(inner_max_abs(qq, trunc.inner_block), inner_max_abs(qp, trunc.inner_block));
}

NestedCommutatorCheck check_nested_commutator(const FockTruncation& trunc, double omega,
                                              const std::array<double, 5>& times, const std::array<double, 5>& g,
                                              double beta) {
  const auto ops = fock_operators(trunc, omega);
  const auto dim = static_cast<Eigen::Index>(trunc.dimension);
  const Matrix identity = Matrix::Identity(dim, dim);

  double direct = 1.0;
  for (std::size_t j = 0; j < 4; ++j) direct *= g[j] * std::cos(omega * (times[4] - times[j]));
  double swapped = 1.0;
  for (std::size_t j : {0, 1, 2, 4}) swapped *= g[j] * std::cos(omega * (times[3] - times[j]));

  NestedCommutatorCheck out;
  out.analytic = 8.0 * beta * (direct - swapped);
  const Matrix plus = nested_commutator(ops, times, g, beta);
  const Matrix minus = nested_commutator(ops, times, g, -beta);
  const Matrix linear = 0.5 * (plus - minus);
  const double scale = std::abs(out.analytic) > 0.0 ? std::abs(out.analytic) : 1.0;
  out.relative_deviation = inner_max_abs(plus - out.analytic * identity, trunc.inner_block) / scale;
  out.linear_relative_deviation = inner_max_abs(linear - out.analytic * identity, trunc.inner_block) / scale;
  out.matrix_scale = inner_max_abs(plus, trunc.inner_block);
  return out;
}

DroppedTermCheck check_dropped_terms_quadratic(const FockTruncation& trunc, double omega,
                                               const std::array<double, 5>& times,
                                               const std::array<double, 5>& g, double beta) {
  const auto ops = fock_operators(trunc, omega);
  return {scaling(trunc, ops, times, g, beta, true), scaling(trunc, ops, times, g, beta, false)};
}

SmoothingReport smoothed_pulse_limit(double reference, const ChainSpec& spec, const NormalModes& modes,
                                     const PulseSchedule& schedule, const std::vector<double>& sigmas,
                                     const QuadraturePlan& plan) {
  if (sigmas.empty()) throw ConfigError("smoothing ladder needs at least one width");
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    if (!(sigmas[k] > 0.0)) throw ConfigError("gaussian widths must be > 0");
    if (k > 0 && !(sigmas[k] < sigmas[k - 1])) throw ConfigError("gaussian widths must be strictly descending");
  }
  if (sigmas.front() > schedule.period / 10.0) throw ConfigError("largest gaussian width must be at most T/10");

  SmoothingReport report;
  report.reference = reference;
  report.sigmas = sigmas;
  for (double sigma : sigmas) {
    const auto g = gaussian_train_for(schedule, sigma);
    const double phi = *magnus5_quadrature(spec, modes, g, schedule.eval_time, plan).quartic_coefficient;
    const double err = std::abs(phi - reference);
    report.phis.push_back(phi);
    report.abs_errors.push_back(err);
    report.rel_errors.push_back(reference != 0.0 ? err / std::abs(reference) : err);
  }
  report.strictly_decreasing = true;
  for (std::size_t k = 1; k < sigmas.size(); ++k) {
    if (!(report.abs_errors[k] < report.abs_errors[k - 1])) report.strictly_decreasing = false;
  }
  if (sigmas.size() >= 2) {
    const std::size_t b = sigmas.size() - 1;
    const std::size_t a = b - 1;
    const double limit = (sigmas[a] * report.phis[b] - sigmas[b] * report.phis[a]) / (sigmas[a] - sigmas[b]);
    const double err = std::abs(limit - reference);
    report.extrapolated = limit;
    report.extrapolated_rel_error = reference != 0.0 ? err / std::abs(reference) : err;
  }
  return report;
}

CoincidenceEstimate coincidence_weight_oracle(const std::vector<double>& chain, std::size_t samples,
                                              std::uint64_t seed) {
  if (chain.empty() || chain.size() > 5) throw ConfigError("coincidence pattern must have 1 to 5 slots");
  if (samples == 0) throw ConfigError("coincidence oracle needs at least one sample");
  double scale = 1.0;
  for (double v : chain) scale = std::max(scale, std::abs(v));
  const double jitter = 1e-6 * scale;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> drawn(chain.size());
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    drawn[0] = chain[0];
    for (std::size_t k = 1; k < chain.size(); ++k) drawn[k] = chain[k] + jitter * unit(rng);
    bool ordered = true;
    for (std::size_t k = 1; k < drawn.size() && ordered; ++k) ordered = drawn[k] < drawn[k - 1];
    if (ordered) ++hits;
  }
  CoincidenceEstimate out;
  out.fraction = static_cast<double>(hits) / static_cast<double>(samples);
  out.expected = simplex_fraction_weight(chain);
  out.samples = samples;
  out.seed = seed;
  return out;
}

}  // namespace gupchain

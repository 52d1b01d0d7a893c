#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gupchain/errors.hpp"
#include "gupchain/pulsed.hpp"
#include "reference/oracles.hpp"

using namespace gupchain;

namespace {

constexpr double kPi = std::numbers::pi;
const double kClosedForm = 5.0 * (9.0 * kPi - 16.0) / 32.0;

ChainSpec chain(std::size_t n, double omega, double omega_c) {
  ChainSpec s;
  s.n_sites = n;
  s.trap_freq = omega;
  s.coupling_freq = omega_c;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<std::vector<double>> site_times(const PulseSchedule& s) {
  std::vector<std::vector<double>> out(s.n_sites);
  for (std::size_t i = 0; i < s.n_sites; ++i)
    for (std::size_t a = 0; a < kPulsesPerSite; ++a) out[i].push_back(pulse_times(s, i, a));
  return out;
}

}  // namespace

TEST(Schedule, PulseTimes) {
  const auto s = PulseSchedule::make(3, 0.0, 1.0, 0.1, 1.0, 10.0);
  EXPECT_DOUBLE_EQ(pulse_times(s, 0, 0), 0.0);
  EXPECT_NEAR(pulse_times(s, 2, 2), 2.2, 1e-15);
  EXPECT_THROW(pulse_times(s, 3, 0), std::out_of_range);
  EXPECT_THROW(pulse_times(s, 0, 4), std::out_of_range);
}

TEST(Schedule, ReinjectionConstraint) {
  EXPECT_THROW(PulseSchedule::make(4, 0.0, 1.0, 0.3, 1.0, 10.0), ConfigError);
  EXPECT_NO_THROW(PulseSchedule::make(4, 0.0, 1.0, 0.25, 1.0, 10.0));
}

TEST(Schedule, EvaluationAfterLastPulse) {
  EXPECT_THROW(PulseSchedule::make(2, 0.0, 1.0, 0.1, 1.0, 3.1), ConfigError);
  EXPECT_NO_THROW(PulseSchedule::make(2, 0.0, 1.0, 0.1, 1.0, 3.1001));
  EXPECT_THROW(PulseSchedule::make(1, 0.0, 0.0, 0.0, 1.0, 1.0), ConfigError);
  EXPECT_THROW(PulseSchedule::make(1, 0.0, 1.0, -0.1, 1.0, 5.0), ConfigError);
  EXPECT_THROW(PulseSchedule::make(1, 0.0, 1.0, 0.0, -1.0, 5.0), ConfigError);
}

TEST(Schedule, TemplateDefaults) {
  const double omega = 3.0;
  const auto s = ScheduleTemplate{}.instantiate(4, omega);
  EXPECT_NEAR(s.period, kPi / (2.0 * omega), 1e-15);
  EXPECT_NEAR(s.site_delay, s.period / 8.0, 1e-15);
  EXPECT_NEAR(s.eval_time, s.last_pulse_time() + 2.0 * kPi / omega, 1e-14);
}

TEST(SimplexWeight, Rules) {
  EXPECT_EQ(simplex_fraction_weight(std::array{10.0, 4.0, 3.0, 2.0, 1.0}), 1.0);
  EXPECT_EQ(simplex_fraction_weight(std::array{10.0, 1.0, 2.0}), 0.0);
  EXPECT_EQ(simplex_fraction_weight(std::array{10.0, 3.0, 3.0}), 0.5);
  EXPECT_NEAR(simplex_fraction_weight(std::array{10.0, 3.0, 3.0, 3.0}), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(simplex_fraction_weight(std::array{10.0, 3.0, 3.0, 1.0, 1.0}), 0.25, 1e-16);
  // Tied non-adjacent entries cannot be strictly ordered.
  EXPECT_EQ(simplex_fraction_weight(std::array{10.0, 3.0, 2.0, 3.0}), 0.0);
  // One and two pulses tied with the upper limit.
  EXPECT_EQ(simplex_fraction_weight(std::array{10.0, 10.0}), 0.5);
  EXPECT_EQ(simplex_fraction_weight(std::array{10.0, 10.0, 10.0}), 0.125);
}

TEST(Heaviside, Examples) {
  const auto first = heaviside_decomposition({1, 2, 3, 4}, 10);
  ASSERT_EQ(first.terms().size(), 2U);
  EXPECT_EQ(first.terms()[0].weight, 1.0);
  EXPECT_EQ(first.terms()[0].a, 3.0);
  EXPECT_EQ(first.terms()[0].b, 4.0);
  EXPECT_EQ(first.terms()[1].weight, -1.0);
  EXPECT_EQ(first.terms()[1].a, 4.0);
  EXPECT_EQ(first.terms()[1].b, 10.0);

  const auto second = heaviside_decomposition({4, 1, 2, 3}, 10);
  ASSERT_EQ(second.terms().size(), 3U);
  EXPECT_EQ(second.terms()[0].weight, 4.0);
  EXPECT_EQ(second.terms()[0].a, 2.0);
  EXPECT_EQ(second.terms()[0].b, 3.0);
  EXPECT_EQ(second.terms()[1].weight, -4.0);
  EXPECT_EQ(second.terms()[1].a, 3.0);
  EXPECT_EQ(second.terms()[1].b, 4.0);
  EXPECT_EQ(second.terms()[2].weight, -1.0);
  EXPECT_EQ(second.terms()[2].a, 0.0);
  EXPECT_EQ(second.terms()[2].b, 2.0);

  EXPECT_TRUE(heaviside_decomposition({11, 12, 13, 14}, 10).empty());
}

TEST(Heaviside, CasesThreeAndFour) {
  const auto third = heaviside_decomposition({4, 2, 3, 1}, 10);
  ASSERT_EQ(third.terms().size(), 1U);
  EXPECT_EQ(third.terms()[0].a, 3.0);
  EXPECT_EQ(third.terms()[0].b, 4.0);
  const auto fourth = heaviside_decomposition({4, 1, 3, 2}, 10);
  ASSERT_EQ(fourth.terms().size(), 1U);
  EXPECT_EQ(fourth.terms()[0].weight, 1.0);
}

TEST(IntervalSum, CompactMergesAndDropsEmpty) {
  IntervalSum s;
  s.add(1.0, 0.0, 1.0);
  s.add(2.0, 1.0, 0.0);
  s.add(3.0, 2.0, 2.0);
  s.add(0.5, 0.0, 3.0);
  s.compact();
  ASSERT_EQ(s.terms().size(), 2U);
  EXPECT_EQ(s.terms()[0].weight, -1.0);
  EXPECT_EQ(s.terms()[1].weight, 0.5);
}

TEST(IntervalSum, SplittingIsAdditive) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::array<double, 4> f{u(rng), u(rng), u(rng), u(rng)};
    const std::array<double, 4> th{u(rng), u(rng), u(rng), u(rng)};
    const double a = u(rng);
    const double b = u(rng);
    const double c = a + (b - a) * 0.37;
    IntervalSum whole;
    whole.add(1.0, a, b);
    IntervalSum split;
    split.add(1.0, a, c);
    split.add(1.0, c, b);
    auto integral = [&](double x, double y) { return trig_product_integral(f, th, x, y); };
    EXPECT_LT(std::abs(whole.evaluate(integral) - split.evaluate(integral)), 1e-13);
  }
}

TEST(TrigIntegral, ZeroFrequencies) {
  EXPECT_DOUBLE_EQ(trig_product_integral({0, 0, 0, 0}, {1, 2, 3, 4}, 0.5, 2.0), 1.5);
}

TEST(TrigIntegral, CosFourth) {
  const double w = 1.7;
  const double a = 0.3;
  const double v = trig_product_integral({w, w, w, w}, {a, a, a, a}, a, a + kPi / (2.0 * w));
  EXPECT_NEAR(v, 3.0 * kPi / (16.0 * w), 1e-15);
}

TEST(TrigIntegral, Orientation) {
  const std::array<double, 4> f{1.0, 2.0, 0.5, 1.5};
  const std::array<double, 4> th{0.1, 0.7, -0.4, 2.0};
  EXPECT_NEAR(trig_product_integral(f, th, 2.0, -1.0), -trig_product_integral(f, th, -1.0, 2.0), 1e-16);
}

TEST(TrigIntegral, MatchesAdaptiveQuadrature) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> freq(0.0, 3.0);
  std::uniform_real_distribution<double> time(-5.0, 5.0);
  std::uniform_real_distribution<double> tiny(-1e-9, 1e-9);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 4> f{freq(rng), freq(rng), freq(rng), freq(rng)};
    if (trial % 4 == 0) f[3] = f[0] + f[1] - f[2] + tiny(rng);  // near resonance
    if (trial % 4 == 1) f[3] = f[0] + f[1] - f[2];                // exact resonance
    const std::array<double, 4> th{time(rng), time(rng), time(rng), time(rng)};
    const double a = time(rng);
    const double b = time(rng);
    const double exact = trig_product_integral(f, th, a, b);
    const double numeric = reference::adaptive_simpson(
        [&](double u) {
          double p = 1.0;
          for (int s = 0; s < 4; ++s) p *= std::cos(f[s] * (th[s] - u));
          return p;
        },
        a, b, 1e-13);
    EXPECT_LT(std::abs(exact - numeric), 1e-10) << "trial " << trial;
  }
}

TEST(PhiSingle, ClosedFormConstant) {
  for (double omega : {1.0, 2.0 * kPi * 1e5, 0.37}) {
    const double t0 = 0.0;
    const double q = kPi / (2.0 * omega);
    const std::array<double, 4> times{t0, t0 + q, t0 + 2 * q, t0 + 3 * q};
    const double phi = phi_single(omega, times, t0 + 3 * q + 2.0 * kPi / omega);
    EXPECT_LT(rel(phi * omega, kClosedForm), 1e-12);
  }
  EXPECT_NEAR(phi_single(2.0 * kPi * 1e5, {0.0, 2.5e-6, 5e-6, 7.5e-6}, 2e-5), 3.0524e-6, 1e-10);
}

TEST(PhiSingle, ConstantAfterLastPulse) {
  const double q = kPi / 2.0;
  const std::array<double, 4> times{0.2, 0.2 + q, 0.2 + 2 * q, 0.2 + 3 * q};
  const double a = phi_single(1.0, times, 0.2 + 3 * q + 0.5);
  const double b = phi_single(1.0, times, 0.2 + 3 * q + 17.3);
  EXPECT_LT(rel(a, b), 1e-8);
}

TEST(PhiSingle, TranslationInvariantAtQuarterPeriod) {
  const double q = kPi / 2.0;
  for (double shift : {0.0, 1.0, 12.5}) {
    const std::array<double, 4> times{shift, shift + q, shift + 2 * q, shift + 3 * q};
    EXPECT_LT(rel(phi_single(1.0, times, shift + 3 * q + 2 * kPi), kClosedForm), 1e-12);
  }
}

TEST(PhiChain, SingleSiteMatchesPhiSingle) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> omega(0.2, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = omega(rng);
    const double period = (0.1 + 2.0 * unit(rng)) / w;
    const double t0 = 3.0 * unit(rng) / w;
    ScheduleTemplate tpl;
    tpl.t0 = t0;
    tpl.period = period;
    const auto s = tpl.instantiate(1, w);
    const auto spec = chain(1, w, 0.0);
    const double a = *phi_chain(spec, normal_modes(spec), s).quartic_coefficient;
    const double b = phi_single(w, {pulse_times(s, 0, 0), pulse_times(s, 0, 1), pulse_times(s, 0, 2),
                                    pulse_times(s, 0, 3)},
                                s.eval_time);
    EXPECT_LT(rel(a, b), 1e-12);
  }
}

TEST(PhiChain, UncoupledIsLinear) {
  const double w = 2.0;
  double phi1 = 0.0;
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto spec = chain(n, w, 0.0);
    const auto s = ScheduleTemplate{}.instantiate(n, w);
    const double phi = *phi_chain(spec, normal_modes(spec), s).quartic_coefficient;
    if (n == 1) phi1 = phi;
    EXPECT_LT(rel(phi, static_cast<double>(n) * phi1), 1e-9);
  }
}

TEST(PhiChain, NaiveAndFactoredAgree) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ratio(0.0, 3.0);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto spec = chain(n, 1.0, ratio(rng));
    const auto s = ScheduleTemplate{}.instantiate(n, 1.0);
    const auto modes = normal_modes(spec);
    const double a = *phi_chain(spec, modes, s, ChainPath::naive).quartic_coefficient;
    const double b = *phi_chain(spec, modes, s, ChainPath::factored).quartic_coefficient;
    EXPECT_LT(rel(a, b), 1e-12) << "n = " << n;
  }
}

TEST(PhiChain, WorkerCountDoesNotChangeBits) {
  const auto spec = chain(3, 1.0, 0.8);
  const auto s = ScheduleTemplate{}.instantiate(3, 1.0);
  const auto modes = normal_modes(spec);
  const double one = *phi_chain(spec, modes, s, ChainPath::factored, 1).quartic_coefficient;
  const double four = *phi_chain(spec, modes, s, ChainPath::factored, 4).quartic_coefficient;
  EXPECT_EQ(one, four);
}

TEST(PhiChain, MatchesSidedMomentOracle) {
  // Independent route for Dirac trains; coincident indices are handled by
  // the factorial weights of the one-sided moments.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ratio(0.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 2; ++trial) {
      const auto spec = chain(n, 1.0, ratio(rng));
      ScheduleTemplate tpl;
      tpl.t0 = unit(rng);
      tpl.period = 0.5 + unit(rng);
      tpl.site_delay = *tpl.period / static_cast<double>(n) * unit(rng);
      const auto s = tpl.instantiate(n, 1.0);
      const auto modes = normal_modes(spec);
      const double closed = *phi_chain(spec, modes, s).quartic_coefficient;
      const double oracle = reference::phi_by_sided_moments(modes.o_matrix, modes.o_prime_matrix,
                                                            modes.frequencies, site_times(s), s.eval_time);
      EXPECT_LT(rel(closed, oracle), 1e-9) << "n = " << n;
    }
  }
}

TEST(PhiChain, SidedMomentOracleReproducesClosedFormConstant) {
  const auto spec = chain(1, 1.0, 0.0);
  const auto s = ScheduleTemplate{}.instantiate(1, 1.0);
  const auto modes = normal_modes(spec);
  const double v =
      reference::phi_by_sided_moments(modes.o_matrix, modes.o_prime_matrix, modes.frequencies, site_times(s), s.eval_time);
  EXPECT_LT(rel(v, kClosedForm), 1e-11);
}

TEST(PhiChain, IndependentOfMassAndStrength) {
  auto spec = chain(2, 1.0, 0.6);
  const auto s = ScheduleTemplate{}.instantiate(2, 1.0);
  const double base = *phi_chain(spec, normal_modes(spec), s).quartic_coefficient;
  spec.mass = 7.5;
  auto strong = s;
  strong.strength = 3.0;
  const auto r = phi_chain(spec, normal_modes(spec), strong);
  EXPECT_LT(rel(*r.quartic_coefficient, base), 1e-13);
  EXPECT_LT(rel(*r.raw_quartic_coefficient, 81.0 / 30.0 * base), 1e-13);
  EXPECT_EQ(r.method, PhaseMethod::closed_form);
}

TEST(PhiChain, RejectsMismatchedSchedule) {
  const auto spec = chain(2, 1.0, 0.5);
  const auto s = ScheduleTemplate{}.instantiate(3, 1.0);
  EXPECT_THROW(phi_chain(spec, normal_modes(spec), s), ConfigError);
}

TEST(ScalingFit, ExactPowerLaws) {
  std::vector<std::pair<double, double>> linear;
  std::vector<std::pair<double, double>> quadratic;
  for (int n = 1; n <= 5; ++n) {
    linear.emplace_back(n, 0.3 * n);
    quadratic.emplace_back(n, 0.3 * n * n);
  }
  EXPECT_NEAR(fit_scaling_exponent(linear).slope, 1.0, 1e-14);
  EXPECT_NEAR(fit_scaling_exponent(quadratic).slope, 2.0, 1e-14);
  EXPECT_NEAR(fit_scaling_exponent(quadratic).residual, 0.0, 1e-25);
}

TEST(ScalingFit, NoisySyntheticData) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<std::pair<double, double>> rows;
  for (int n = 1; n <= 8; ++n) rows.emplace_back(n, 2.0 * std::pow(n, 2.7) * (1.0 + noise(rng)));
  EXPECT_NEAR(fit_scaling_exponent(rows).slope, 2.7, 0.1);
}

TEST(ScalingFit, Undefined) {
  const std::vector<std::pair<double, double>> one{{1.0, 1.0}};
  EXPECT_THROW(fit_scaling_exponent(one), ConfigError);
  const std::vector<std::pair<double, double>> zero{{1.0, 1.0}, {2.0, 0.0}};
  EXPECT_THROW(fit_scaling_exponent(zero), ConfigError);
}

TEST(Scan, UncoupledSlopeIsOne) {
  const auto spec = chain(1, 1.0, 0.0);
  const std::vector<double> omega_c{0.0};
  const auto result = scan_lattice(spec, ScheduleTemplate{}, 1, 5, omega_c);
  ASSERT_EQ(result.rows.size(), 5U);
  ASSERT_TRUE(result.fits[0].fit);
  EXPECT_NEAR(result.fits[0].fit->slope, 1.0, 1e-6);
  for (const auto& row : result.rows) EXPECT_LT(rel(*row.phi, row.n_times_phi1), 1e-9);
}

TEST(Scan, SingleRowHasNoSlope) {
  const auto spec = chain(1, 1.0, 0.0);
  const std::vector<double> omega_c{0.5};
  const auto result = scan_lattice(spec, ScheduleTemplate{}, 2, 2, omega_c);
  EXPECT_FALSE(result.fits[0].fit);
}

TEST(Scan, FailedRowsAreMarked) {
  const auto spec = chain(1, 1.0, 0.0);
  ScheduleTemplate tpl;
  tpl.period = 1.0;
  tpl.site_delay = 0.4;  // violates T >= N tau from N = 3
  const std::vector<double> omega_c{0.0};
  const auto result = scan_lattice(spec, tpl, 1, 3, omega_c);
  EXPECT_TRUE(result.rows[1].error.empty());
  EXPECT_FALSE(result.rows[2].error.empty());
  EXPECT_FALSE(result.rows[2].phi);
  EXPECT_TRUE(result.fits[0].fit);
}

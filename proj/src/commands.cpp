#include "gupchain/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gupchain/errors.hpp"
#include "gupchain/lattice.hpp"
#include "gupchain/magnus.hpp"
#include "gupchain/oracle.hpp"
#include "gupchain/pulsed.hpp"

namespace gupchain {

namespace {

constexpr double kCanonicalTolerance = 1e-12;
constexpr double kIdentityTolerance = 1e-10;
constexpr double kNestedTolerance = 1e-4;
constexpr double kSmoothingTolerance = 1e-2;
constexpr double kCoincidenceTolerance = 0.01;
constexpr double kFockBeta = 1e-6;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"modes",       "phase-standard",     "phase-gup-single",
                                              "phase-gup-chain", "scan",           "oracle fock",
                                              "oracle smoothing", "oracle coincidence", "oracle dropped-terms"};
  return names;
}

Cell count(std::size_t n) { return static_cast<std::int64_t>(n); }

Cell optional_double(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

Metadata base_metadata(const std::string& command, const std::optional<RunConfig>& config) {
  Metadata md{{"command", command}};
  if (config) {
    auto resolved = config->metadata();
    md.insert(md.end(), resolved.begin(), resolved.end());
  }
  return md;
}

CommandResult run_modes(const RunConfig& cfg) {
  const auto spec = cfg.chain();
  const auto modes = normal_modes(spec);
  const std::size_t n = modes.size();
  Table t{"modes", {"mode", "omega_rad_s", "frequency_hz"}, {}};
  for (std::size_t i = 0; i < n; ++i) t.columns.push_back("p_site_" + std::to_string(i + 1));
  for (std::size_t k = 0; k < n; ++k) {
    const double w = modes.frequencies(static_cast<Eigen::Index>(k));
    std::vector<Cell> row{count(k + 1), w, w / (2.0 * std::numbers::pi)};
    for (std::size_t i = 0; i < n; ++i) {
      row.emplace_back(modes.p_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    t.add(std::move(row));
  }
  CommandResult r;
  const double dev = canonical_deviation(modes);
  r.metadata.emplace_back("canonical_deviation", format_double(dev));
  r.tables.push_back(std::move(t));
  if (!(dev <= kCanonicalTolerance)) r.exit_code = kExitInvariant;
  return r;
}

CommandResult run_phase_standard(const RunConfig& cfg) {
  const auto schedule = cfg.schedule(1);
  const double omega = cfg.trap_freq();
  const double sigma = cfg.sigma_over_T * schedule.period;
  const auto g = gaussian_train_for(schedule, sigma);
  QuadraturePlan plan;
  plan.order = cfg.quadrature_order;
  const auto result = quadratic_phase(g, omega, schedule.eval_time, plan);
  const auto times = schedule.all_times();
  const double dirac = quadratic_phase_dirac(omega, times, schedule.strength);

  Table t{"phase-standard",
          {"sigma_s", "eval_time_s", "f_quadrature", "f_delta", "abs_difference", "error_estimate"},
          {}};
  t.add({sigma, schedule.eval_time, *result.quadratic_coefficient, dirac,
         std::abs(*result.quadratic_coefficient - dirac), result.error_estimate});
  CommandResult r;
  r.metadata.emplace_back("sites_used", "1");
  r.metadata.emplace_back("method", std::string(to_string(result.method)));
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult run_phase_gup_single(const RunConfig& cfg) {
  const auto schedule = cfg.schedule(1);
  const double omega = cfg.trap_freq();
  const std::array<double, 4> times{pulse_times(schedule, 0, 0), pulse_times(schedule, 0, 1),
                                    pulse_times(schedule, 0, 2), pulse_times(schedule, 0, 3)};
  const double phi = phi_single(omega, times, schedule.eval_time);
  Table t{"phase-gup-single", {"omega_rad_s", "eval_time_s", "phi_s", "phi_times_omega"}, {}};
  t.add({omega, schedule.eval_time, phi, phi * omega});
  CommandResult r;
  r.metadata.emplace_back("sites_used", "1");
  r.metadata.emplace_back("method", std::string(to_string(PhaseMethod::closed_form)));
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult run_phase_gup_chain(const RunConfig& cfg) {
  const auto spec = cfg.chain();
  const auto schedule = cfg.schedule();
  const auto result = phi_chain(spec, normal_modes(spec), schedule);

  ChainSpec single = spec;
  single.n_sites = 1;
  const double phi1 = *phi_chain(single, normal_modes(single), cfg.schedule(1)).quartic_coefficient;
  const double phi = *result.quartic_coefficient;

  Table t{"phase-gup-chain",
          {"n", "omega_c_hz", "phi_s", "abs_phi_s", "n_times_phi1_s", "eval_time_s", "error_estimate"},
          {}};
  t.add({count(spec.n_sites), cfg.coupling_freq_hz, phi, std::abs(phi),
         static_cast<double>(spec.n_sites) * std::abs(phi1), schedule.eval_time, result.error_estimate});
  CommandResult r;
  r.metadata.emplace_back("method", std::string(to_string(result.method)));
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult run_scan(const RunConfig& cfg) {
  const auto spec = cfg.chain();
  std::vector<double> omega_c;
  for (double hz : cfg.scan_omega_c_hz_list) omega_c.push_back(2.0 * std::numbers::pi * hz);
  const auto scan = scan_lattice(spec, cfg.schedule_template(), cfg.scan_n_min, cfg.scan_n_max, omega_c);

  Table rows{"scan", {"n", "omega_c_hz", "phi_s", "abs_phi_s", "n_times_phi1_s", "eval_time_s", "error"}, {}};
  for (const auto& row : scan.rows) {
    const double hz = row.omega_c / (2.0 * std::numbers::pi);
    rows.add({count(row.n), hz, optional_double(row.phi),
              row.phi ? Cell{std::abs(*row.phi)} : Cell{}, row.n_times_phi1, row.eval_time,
              row.error.empty() ? Cell{} : Cell{row.error}});
  }
  Table fits{"fit", {"omega_c_hz", "slope", "residual", "points"}, {}};
  for (const auto& fit : scan.fits) {
    const double hz = fit.omega_c / (2.0 * std::numbers::pi);
    if (fit.fit) {
      fits.add({hz, fit.fit->slope, fit.fit->residual, count(fit.fit->points)});
    } else {
      fits.add({hz, Cell{}, Cell{}, count(0)});
    }
  }
  CommandResult r;
  r.metadata.emplace_back("method", std::string(to_string(PhaseMethod::closed_form)));
  r.tables.push_back(std::move(rows));
  r.tables.push_back(std::move(fits));
  return r;
}

void add_check(Table& t, CommandResult& r, const std::string& name, const Cell& value, const std::string& bound,
               bool pass) {
  t.add({name, value, bound, pass});
  if (!pass) r.exit_code = kExitInvariant;
}

CommandResult run_oracle_fock() {
  const FockTruncation trunc;
  std::mt19937_64 rng(kFockSeed);
  std::uniform_real_distribution<double> time(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> coupling(0.5, 1.5);

  CommandResult r;
  r.metadata.emplace_back("dimension", std::to_string(trunc.dimension));
  r.metadata.emplace_back("inner_block", std::to_string(trunc.inner_block));
  r.metadata.emplace_back("seed", std::to_string(kFockSeed));
  r.metadata.emplace_back("beta", format_double(kFockBeta));
  r.metadata.emplace_back("units", "hbar = m = Omega = 1");
  Table t{"oracle-fock", {"check", "value", "bound", "pass"}, {}};

  const double t1 = time(rng);
  const double t2 = time(rng);
  for (int n = 1; n <= 4; ++n) {
    const double dev = check_commutator_identities(trunc, 1.0, t1, t2, n);
    add_check(t, r, "commutator_identity_n" + std::to_string(n), dev, "<= 1e-10", dev <= kIdentityTolerance);
  }
  const double quarter = check_commutator_identities(trunc, 1.0, 0.0, 0.5 * std::numbers::pi, 4);
  add_check(t, r, "commutator_identity_n4_quarter_period", quarter, "<= 1e-10", quarter <= kIdentityTolerance);

  std::array<double, 5> times{};
  std::array<double, 5> g{};
  for (auto& v : times) v = time(rng);
  for (auto& v : g) v = coupling(rng);
  const auto nested = check_nested_commutator(trunc, 1.0, times, g, kFockBeta);
  add_check(t, r, "nested_commutator_relative", nested.relative_deviation, "<= 1e-4",
            nested.relative_deviation <= kNestedTolerance);
  add_check(t, r, "nested_commutator_linear_part_relative", nested.linear_relative_deviation, "<= 1e-4",
            nested.linear_relative_deviation <= kNestedTolerance);
  const auto zero = check_nested_commutator(trunc, 1.0, times, g, 0.0);
  add_check(t, r, "nested_commutator_beta0_scale", zero.matrix_scale, "<= 1e-10",
            zero.matrix_scale <= kIdentityTolerance);

  const auto dropped = check_dropped_terms_quadratic(trunc, 1.0, times, g, kFockBeta);
  const auto in = [](const std::optional<double>& v, double lo, double hi) { return v && *v >= lo && *v <= hi; };
  add_check(t, r, "dropped_term_ratio", optional_double(dropped.dropped.ratio), "[3.8, 4.2]",
            in(dropped.dropped.ratio, 3.8, 4.2));
  add_check(t, r, "kept_term_ratio", optional_double(dropped.kept.ratio), "[1.9, 2.1]", in(dropped.kept.ratio, 1.9, 2.1));
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult run_oracle_smoothing(const RunConfig& cfg) {
  const auto spec = cfg.chain();
  const auto modes = normal_modes(spec);
  const auto schedule = cfg.schedule();
  const double reference = *phi_chain(spec, modes, schedule).quartic_coefficient;
  const double base = cfg.sigma_over_T * schedule.period;
  QuadraturePlan plan;
  plan.order = cfg.quadrature_order;
  const auto report = smoothed_pulse_limit(reference, spec, modes, schedule, {4.0 * base, 2.0 * base, base}, plan);

  Table t{"oracle-smoothing", {"sigma_s", "sigma_over_T", "phi_quadrature_s", "phi_closed_s", "abs_error", "rel_error"},
          {}};
  for (std::size_t k = 0; k < report.sigmas.size(); ++k) {
    t.add({report.sigmas[k], report.sigmas[k] / schedule.period, report.phis[k], reference, report.abs_errors[k],
           report.rel_errors[k]});
  }
  Table summary{"summary", {"check", "value", "bound", "pass"}, {}};
  CommandResult r;
  add_check(summary, r, "errors_strictly_decreasing", report.strictly_decreasing, "true", report.strictly_decreasing);
  const double final_rel = report.rel_errors.back();
  add_check(summary, r, "final_rel_error", final_rel, "< 1e-2", final_rel < kSmoothingTolerance);
  summary.add({"extrapolated_phi_s", optional_double(report.extrapolated), "", Cell{}});
  summary.add({"extrapolated_rel_error", optional_double(report.extrapolated_rel_error), "", Cell{}});
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(summary));
  return r;
}

CommandResult run_oracle_coincidence() {
  struct Pattern {
    const char* name;
    std::vector<double> chain;
  };
  const std::vector<Pattern> patterns{
      {"pair", {1.0, 0.5, 0.5}},
      {"triple", {1.0, 0.5, 0.5, 0.5}},
      {"two_pairs", {1.0, 0.7, 0.7, 0.3, 0.3}},
      {"tied_with_upper_limit", {1.0, 1.0, 1.0}},
      {"no_ties_ordered", {1.0, 0.8, 0.6, 0.4, 0.2}},
      {"no_ties_unordered", {1.0, 0.2, 0.6}},
  };
  CommandResult r;
  r.metadata.emplace_back("samples", std::to_string(kCoincidenceSamples));
  r.metadata.emplace_back("seed", std::to_string(kCoincidenceSeed));
  Table t{"oracle-coincidence", {"pattern", "monte_carlo", "simplex_weight", "abs_difference", "pass"}, {}};
  for (const auto& p : patterns) {
    const auto est = coincidence_weight_oracle(p.chain);
    const double diff = std::abs(est.fraction - est.expected);
    const bool pass = diff <= kCoincidenceTolerance;
    t.add({std::string(p.name), est.fraction, est.expected, diff, pass});
    if (!pass) r.exit_code = kExitInvariant;
  }
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult run_oracle_dropped_terms() {
  const FockTruncation trunc;
  std::mt19937_64 rng(kFockSeed);
  std::uniform_real_distribution<double> time(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> coupling(0.5, 1.5);
  std::array<double, 5> times{};
  std::array<double, 5> g{};
  for (auto& v : times) v = time(rng);
  for (auto& v : g) v = coupling(rng);

  CommandResult r;
  r.metadata.emplace_back("seed", std::to_string(kFockSeed));
  r.metadata.emplace_back("beta", format_double(kFockBeta));
  Table t{"oracle-dropped-terms", {"term", "value_beta", "value_2beta", "ratio", "lower", "upper", "pass"}, {}};
  const auto check = check_dropped_terms_quadratic(trunc, 1.0, times, g, kFockBeta);
  const auto add = [&](const char* name, const BetaScaling& s, double lo, double hi) {
    const bool pass = s.ratio && *s.ratio >= lo && *s.ratio <= hi;
    t.add({std::string(name), s.value_beta, s.value_2beta, optional_double(s.ratio), lo, hi, pass});
    if (!pass) r.exit_code = kExitInvariant;
  };
  add("[[H5,H1],[H4,[H2,H3]]]", check.dropped, 3.8, 4.2);
  add("[H5,[H4,[H3,[H2,H1]]]]", check.kept, 1.9, 2.1);
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace

std::string usage() {
  std::ostringstream os;
  os << "usage: gupchain [--config <path>] [--out <path>] [--format csv|jsonl] <command>\n"
     << "commands:\n";
  for (const auto& name : command_names()) os << "  " << name << '\n';
  return os.str();
}

std::string canonical_command(const std::vector<std::string>& words) {
  std::string joined;
  for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
  if (joined.rfind("oracle-", 0) == 0) joined[6] = ' ';
  const auto& names = command_names();
  return std::find(names.begin(), names.end(), joined) != names.end() ? joined : std::string{};
}

bool command_needs_config(const std::string& command) {
  return command != "oracle fock" && command != "oracle coincidence" && command != "oracle dropped-terms";
}

CommandResult run_command(const std::string& command, const std::optional<RunConfig>& config) {
  if (command_needs_config(command) && !config) throw ConfigError("command '" + command + "' needs --config");
  CommandResult r;
  if (command == "modes") {
    r = run_modes(*config);
  } else if (command == "phase-standard") {
    r = run_phase_standard(*config);
  } else if (command == "phase-gup-single") {
    r = run_phase_gup_single(*config);
  } else if (command == "phase-gup-chain") {
    r = run_phase_gup_chain(*config);
  } else if (command == "scan") {
    r = run_scan(*config);
  } else if (command == "oracle fock") {
    r = run_oracle_fock();
  } else if (command == "oracle smoothing") {
    r = run_oracle_smoothing(*config);
  } else if (command == "oracle coincidence") {
    r = run_oracle_coincidence();
  } else if (command == "oracle dropped-terms") {
    r = run_oracle_dropped_terms();
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  auto md = base_metadata(command, config);
  md.insert(md.end(), r.metadata.begin(), r.metadata.end());
  r.metadata = std::move(md);
  return r;
}

int dispatch(const std::vector<std::string>& words, const std::optional<RunConfig>& config, std::ostream& out,
             std::ostream& err, OutputFormat format) {
  const std::string command = canonical_command(words);
  if (command.empty()) {
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    err << "unknown command '" << joined << "'\n" << usage();
    return kExitConfig;
  }
  try {
    const auto result = run_command(command, config);
    write_results(out, format, result.metadata, result.tables);
    if (result.exit_code == kExitInvariant) err << "self-check failed; see the pass column\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace gupchain

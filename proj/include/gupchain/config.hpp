#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gupchain/lattice.hpp"
#include "gupchain/pulsed.hpp"

namespace gupchain {

enum class OutputFormat { csv, jsonl };

OutputFormat parse_output_format(std::string_view text);
std::string_view to_string(OutputFormat format) noexcept;

/// Run parameters as read from a flat `key = value` file. Frequencies are in
/// Hz at the interface and converted to rad/s (times 2 pi) on use.
struct RunConfig {
  std::size_t n_sites = 1;
  double mass_kg = 1.0;
  double trap_freq_hz = 0.0;
  double coupling_freq_hz = 0.0;
  double pulse_strength = 1.0;
  double t0_s = 0.0;
  std::optional<double> period_s;
  std::optional<double> site_delay_s;
  std::optional<double> eval_time_s;

  std::size_t scan_n_min = 1;
  std::size_t scan_n_max = 5;
  /// Defaults to {coupling_freq_hz}.
  std::vector<double> scan_omega_c_hz_list;

  int quadrature_order = 24;
  double sigma_over_T = 1.0 / 200.0;

  std::string output_path;  // empty: stdout
  OutputFormat output_format = OutputFormat::csv;

  [[nodiscard]] double trap_freq() const noexcept;      // rad/s
  [[nodiscard]] double coupling_freq() const noexcept;  // rad/s
  [[nodiscard]] ChainSpec chain() const;
  [[nodiscard]] ScheduleTemplate schedule_template() const;
  /// Schedule for `n` sites (n_sites when omitted).
  [[nodiscard]] PulseSchedule schedule(std::optional<std::size_t> n = std::nullopt) const;

  /// Every key with its resolved value, including derived defaults.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> metadata() const;
};

/// Parses `key = value` lines with `#` comments. Required keys: n_sites,
/// trap_freq_hz. Throws ConfigError naming the line for unknown keys,
/// duplicates and unparsable numbers.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// %.16e, the fixed 17-significant-digit form used in every output file.
std::string format_double(double value);

}  // namespace gupchain

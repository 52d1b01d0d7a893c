#include "gupchain/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "gupchain/errors.hpp"

namespace gupchain {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string at_line(std::size_t line, const std::string& message) {
  return "line " + std::to_string(line) + ": " + message;
}

double parse_double(std::string_view key, std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError(at_line(line, "cannot parse '" + std::string(text) + "' as a number for " + std::string(key)));
  }
  return value;
}

std::size_t parse_count(std::string_view key, std::string_view text, std::size_t line) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(at_line(line, "cannot parse '" + std::string(text) + "' as an integer for " + std::string(key)));
  }
  if (value < 1) throw ConfigError(at_line(line, std::string(key) + " must be >= 1"));
  return static_cast<std::size_t>(value);
}

std::vector<double> parse_list(std::string_view key, std::string_view text, std::size_t line) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, trim(text.substr(0, comma)), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(at_line(line, std::string(key) + " needs at least one value"));
  return out;
}

void require(bool ok, std::size_t line, const std::string& message) {
  if (!ok) throw ConfigError(at_line(line, message));
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys{
      "n_sites",        "mass_kg",        "trap_freq_hz",        "coupling_freq_hz",  "pulse_strength",
      "t0_s",           "period_s",       "site_delay_s",        "eval_time_s",       "scan.n_min",
      "scan.n_max",     "scan.omega_c_hz_list", "quadrature.order", "quadrature.sigma_over_T", "output.path",
      "output.format"};
  return keys;
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "jsonl") return OutputFormat::jsonl;
  throw ConfigError("output format must be csv or jsonl, got '" + std::string(text) + "'");
}

std::string_view to_string(OutputFormat format) noexcept { return format == OutputFormat::csv ? "csv" : "jsonl"; }

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

double RunConfig::trap_freq() const noexcept { return 2.0 * std::numbers::pi * trap_freq_hz; }
double RunConfig::coupling_freq() const noexcept { return 2.0 * std::numbers::pi * coupling_freq_hz; }

ChainSpec RunConfig::chain() const {
  ChainSpec spec;
  spec.n_sites = n_sites;
  spec.mass = mass_kg;
  spec.trap_freq = trap_freq();
  spec.coupling_freq = coupling_freq();
  spec.validate();
  return spec;
}

ScheduleTemplate RunConfig::schedule_template() const {
  ScheduleTemplate tpl;
  tpl.t0 = t0_s;
  tpl.strength = pulse_strength;
  tpl.period = period_s;
  tpl.site_delay = site_delay_s;
  tpl.eval_time = eval_time_s;
  return tpl;
}

PulseSchedule RunConfig::schedule(std::optional<std::size_t> n) const {
  return schedule_template().instantiate(n.value_or(n_sites), trap_freq());
}

std::vector<std::pair<std::string, std::string>> RunConfig::metadata() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("n_sites", std::to_string(n_sites));
  out.emplace_back("mass_kg", format_double(mass_kg));
  out.emplace_back("trap_freq_hz", format_double(trap_freq_hz));
  out.emplace_back("trap_freq_rad_s", format_double(trap_freq()));
  out.emplace_back("coupling_freq_hz", format_double(coupling_freq_hz));
  out.emplace_back("coupling_freq_rad_s", format_double(coupling_freq()));
  out.emplace_back("pulse_strength", format_double(pulse_strength));
  out.emplace_back("t0_s", format_double(t0_s));
  const auto s = schedule();
  out.emplace_back("period_s", format_double(s.period) + (period_s ? "" : " (default pi/(2 Omega))"));
  out.emplace_back("site_delay_s", format_double(s.site_delay) + (site_delay_s ? "" : " (default T/(2N))"));
  out.emplace_back("eval_time_s",
                   format_double(s.eval_time) + (eval_time_s ? "" : " (default last pulse + 2 pi/Omega)"));
  out.emplace_back("scan.n_min", std::to_string(scan_n_min));
  out.emplace_back("scan.n_max", std::to_string(scan_n_max));
  std::string list;
  for (double v : scan_omega_c_hz_list) list += (list.empty() ? "" : ",") + format_double(v);
  out.emplace_back("scan.omega_c_hz_list", list);
  out.emplace_back("quadrature.order", std::to_string(quadrature_order));
  out.emplace_back("quadrature.sigma_over_T", format_double(sigma_over_T));
  out.emplace_back("output.path", output_path.empty() ? "-" : output_path);
  out.emplace_back("output.format", std::string(to_string(output_format)));
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t last_line = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    last_line = line_no;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    require(!key.empty(), line_no, "missing key before '='");
    require(known_keys().contains(key), line_no, "unknown key '" + std::string(key) + "'");
    require(!value.empty(), line_no, "missing value for " + std::string(key));
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(at_line(line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                             std::to_string(it->second) + ")"));
    }
    seen.emplace(std::string(key), line_no);

    if (key == "n_sites") {
      cfg.n_sites = parse_count(key, value, line_no);
    } else if (key == "mass_kg") {
      cfg.mass_kg = parse_double(key, value, line_no);
      require(cfg.mass_kg > 0.0, line_no, "mass_kg must be > 0");
    } else if (key == "trap_freq_hz") {
      cfg.trap_freq_hz = parse_double(key, value, line_no);
      require(cfg.trap_freq_hz > 0.0, line_no, "trap_freq_hz must be > 0");
    } else if (key == "coupling_freq_hz") {
      cfg.coupling_freq_hz = parse_double(key, value, line_no);
      require(cfg.coupling_freq_hz >= 0.0, line_no, "coupling_freq_hz must be >= 0");
    } else if (key == "pulse_strength") {
      cfg.pulse_strength = parse_double(key, value, line_no);
      require(cfg.pulse_strength >= 0.0, line_no, "pulse_strength must be >= 0");
    } else if (key == "t0_s") {
      cfg.t0_s = parse_double(key, value, line_no);
    } else if (key == "period_s") {
      cfg.period_s = parse_double(key, value, line_no);
      require(*cfg.period_s > 0.0, line_no, "period_s must be > 0");
    } else if (key == "site_delay_s") {
      cfg.site_delay_s = parse_double(key, value, line_no);
      require(*cfg.site_delay_s >= 0.0, line_no, "site_delay_s must be >= 0");
    } else if (key == "eval_time_s") {
      cfg.eval_time_s = parse_double(key, value, line_no);
    } else if (key == "scan.n_min") {
      cfg.scan_n_min = parse_count(key, value, line_no);
    } else if (key == "scan.n_max") {
      cfg.scan_n_max = parse_count(key, value, line_no);
    } else if (key == "scan.omega_c_hz_list") {
      cfg.scan_omega_c_hz_list = parse_list(key, value, line_no);
      for (double v : cfg.scan_omega_c_hz_list) require(v >= 0.0, line_no, "coupling frequencies must be >= 0");
    } else if (key == "quadrature.order") {
      cfg.quadrature_order = static_cast<int>(parse_count(key, value, line_no));
      require(cfg.quadrature_order >= 4, line_no, "quadrature.order must be >= 4");
    } else if (key == "quadrature.sigma_over_T") {
      cfg.sigma_over_T = parse_double(key, value, line_no);
      require(cfg.sigma_over_T > 0.0 && cfg.sigma_over_T <= 0.025, line_no,
              "quadrature.sigma_over_T must be in (0, 1/40]");
    } else if (key == "output.path") {
      cfg.output_path = std::string(value);
    } else if (key == "output.format") {
      try {
        cfg.output_format = parse_output_format(value);
      } catch (const ConfigError& e) {
        throw ConfigError(at_line(line_no, e.what()));
      }
    }
  }

  const std::size_t end_line = line_no + 1;
  for (const char* key : {"n_sites", "trap_freq_hz"}) {
    if (!seen.contains(key)) throw ConfigError(at_line(end_line, std::string("missing required key '") + key + "'"));
  }
  if (cfg.scan_n_max < cfg.scan_n_min) {
    throw ConfigError(at_line(seen.contains("scan.n_max") ? seen.find("scan.n_max")->second : last_line,
                              "scan.n_max must be >= scan.n_min"));
  }
  if (cfg.scan_omega_c_hz_list.empty()) cfg.scan_omega_c_hz_list = {cfg.coupling_freq_hz};

  // Schedule-level invariants (re-injection, evaluation after the last pulse).
  try {
    (void)cfg.schedule();
  } catch (const ConfigError& e) {
    throw ConfigError(at_line(last_line, e.what()));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace gupchain

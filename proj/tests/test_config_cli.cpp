#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gupchain/commands.hpp"
#include "gupchain/config.hpp"
#include "gupchain/errors.hpp"
#include "gupchain/output.hpp"
#include "json.hpp"

using namespace gupchain;

namespace {

std::string config_error(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& words, const std::optional<RunConfig>& cfg,
        OutputFormat format = OutputFormat::csv) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dispatch(words, cfg, out, err, format);
  return {code, out.str(), err.str()};
}

const char* kSingle = "n_sites = 1\ntrap_freq_hz = 1e5\n";

}  // namespace

TEST(Config, MinimalDefaults) {
  const auto cfg = parse_config(kSingle);
  EXPECT_EQ(cfg.n_sites, 1U);
  EXPECT_EQ(cfg.mass_kg, 1.0);
  EXPECT_NEAR(cfg.trap_freq(), 2.0 * std::numbers::pi * 1e5, 1e-9);
  EXPECT_EQ(cfg.scan_omega_c_hz_list, std::vector<double>{0.0});
  const auto s = cfg.schedule();
  EXPECT_NEAR(s.period, std::numbers::pi / (2.0 * cfg.trap_freq()), 1e-20);
}

TEST(Config, CommentsListsAndFormat) {
  const auto cfg = parse_config(
      "# header\n n_sites = 3  # trailing\ntrap_freq_hz=2\nscan.omega_c_hz_list = 0.2, 1.0\noutput.format = jsonl\n");
  EXPECT_EQ(cfg.n_sites, 3U);
  EXPECT_EQ(cfg.scan_omega_c_hz_list, (std::vector<double>{0.2, 1.0}));
  EXPECT_EQ(cfg.output_format, OutputFormat::jsonl);
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_EQ(config_error("n_sites = 0\n"), "line 1: n_sites must be >= 1");
  EXPECT_EQ(config_error(""), "line 1: missing required key 'n_sites'");
  EXPECT_EQ(config_error("n_sites = 2\n\nbogus = 1\n"), "line 3: unknown key 'bogus'");
  EXPECT_NE(config_error("n_sites = 2\nn_sites = 3\ntrap_freq_hz = 1\n").find("line 2: duplicate key"),
            std::string::npos);
  EXPECT_NE(config_error("n_sites = 2\ntrap_freq_hz = fast\n").find("line 2:"), std::string::npos);
  EXPECT_NE(config_error("n_sites = 2\n").find("trap_freq_hz"), std::string::npos);
  EXPECT_NE(config_error("n_sites = 1\ntrap_freq_hz = 1\nquadrature.sigma_over_T = 0.1\n").find("line 3"),
            std::string::npos);
}

TEST(Config, ReinjectionRejected) {
  EXPECT_FALSE(config_error("n_sites = 4\ntrap_freq_hz = 1\nperiod_s = 1\nsite_delay_s = 0.3\n").empty());
}

TEST(Config, FormatDouble) { EXPECT_EQ(format_double(0.1), "1.0000000000000001e-01"); }

TEST(Output, CsvLayout) {
  Table a{"first", {"x", "y"}, {}};
  a.add({1.5, std::int64_t{2}});
  Table b{"second", {"name", "ok"}, {}};
  b.add({std::string("p"), true});
  b.add({Cell{}, false});
  std::ostringstream os;
  write_results(os, OutputFormat::csv, {{"command", "demo"}}, {a, b});
  EXPECT_EQ(os.str(),
            "# command = demo\nx,y\n1.5000000000000000e+00,2\n# table = second\nname,ok\np,true\n,false\n");
}

TEST(Output, JsonLinesParse) {
  Table a{"first", {"x", "s"}, {}};
  a.add({0.25, std::string("quote\"d")});
  Table b{"second", {"v"}, {}};
  b.add({Cell{}});
  std::ostringstream os;
  write_results(os, OutputFormat::jsonl, {{"command", "demo"}}, {a, b});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(nlohmann::json::parse(line)["metadata"]["command"], "demo");
  std::getline(in, line);
  const auto row = nlohmann::json::parse(line);
  EXPECT_EQ(row["x"].get<double>(), 0.25);
  EXPECT_EQ(row["s"], "quote\"d");
  std::getline(in, line);
  const auto second = nlohmann::json::parse(line);
  EXPECT_EQ(second["table"], "second");
  EXPECT_TRUE(second["v"].is_null());
}

TEST(Cli, CommandNames) {
  EXPECT_EQ(canonical_command({"oracle", "fock"}), "oracle fock");
  EXPECT_EQ(canonical_command({"oracle-fock"}), "oracle fock");
  EXPECT_EQ(canonical_command({"scan"}), "scan");
  EXPECT_EQ(canonical_command({"nope"}), "");
}

TEST(Cli, UnknownCommandExitsWithUsage) {
  const auto r = run({"frobnicate"}, std::nullopt);
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("usage:"), std::string::npos);
}

TEST(Cli, MissingConfigIsConfigError) { EXPECT_EQ(run({"scan"}, std::nullopt).code, kExitConfig); }

TEST(Cli, PhaseGupSingleConstant) {
  const auto r = run({"phase-gup-single"}, parse_config(kSingle), OutputFormat::jsonl);
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const double value = nlohmann::json::parse(line)["phi_times_omega"].get<double>();
  EXPECT_LT(std::abs(value - 5.0 * (9.0 * std::numbers::pi - 16.0) / 32.0) / value, 1e-12);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const auto cfg = parse_config(
      "n_sites = 3\ntrap_freq_hz = 1e5\ncoupling_freq_hz = 5e4\nscan.n_max = 3\nscan.omega_c_hz_list = 1e4, 5e4\n");
  for (const char* command : {"scan", "phase-gup-chain", "modes"}) {
    const auto a = run({command}, cfg);
    const auto b = run({command}, cfg);
    EXPECT_EQ(a.code, kExitOk) << command;
    EXPECT_EQ(a.out, b.out) << command;
  }
}

TEST(Cli, ScanWritesFitTable) {
  const auto cfg = parse_config("n_sites = 1\ntrap_freq_hz = 1\nscan.n_max = 3\n");
  const auto r = run({"scan"}, cfg);
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("# table = fit"), std::string::npos);
  EXPECT_NE(r.out.find("# method = closed-form"), std::string::npos);
}

TEST(Cli, ModesPassesCanonicalCheck) {
  const auto r = run({"modes"}, parse_config("n_sites = 6\ntrap_freq_hz = 1e5\ncoupling_freq_hz = 2e5\n"));
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("p_site_6"), std::string::npos);
}

TEST(Cli, CoincidenceOraclePasses) { EXPECT_EQ(run({"oracle", "coincidence"}, std::nullopt).code, kExitOk); }

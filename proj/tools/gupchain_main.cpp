#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gupchain/commands.hpp"
#include "gupchain/config.hpp"
#include "gupchain/errors.hpp"

int main(int argc, char** argv) {
  using namespace gupchain;

  CLI::App app{"Deformed-commutator optical phases of pulsed optomechanical chains"};
  std::string config_path;
  std::string out_path;
  std::string format_text;
  std::string command_flag;
  std::vector<std::string> words;
  app.add_option("--config", config_path, "Flat key = value run configuration");
  app.add_option("--out", out_path, "Output file (overrides output.path; default stdout)");
  app.add_option("--format", format_text, "csv or jsonl (overrides output.format)");
  app.add_option("--command", command_flag, "Command name, e.g. scan or \"oracle fock\"");
  app.add_option("words", words, "Command words");
  app.footer(usage());
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (!command_flag.empty()) words.insert(words.begin(), command_flag);
  if (words.empty()) {
    std::cerr << usage();
    return kExitConfig;
  }

  std::optional<RunConfig> config;
  OutputFormat format = OutputFormat::csv;
  try {
    if (!config_path.empty()) {
      config = load_config(config_path);
      format = config->output_format;
      if (!out_path.empty()) config->output_path = out_path;
    }
    if (!format_text.empty()) {
      format = parse_output_format(format_text);
      if (config) config->output_format = format;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::string target = !out_path.empty() ? out_path : (config ? config->output_path : std::string{});
  if (target.empty() || target == "-") return dispatch(words, config, std::cout, std::cerr, format);
  std::ofstream file(target);
  if (!file) {
    std::cerr << "cannot open output file " << target << '\n';
    return kExitConfig;
  }
  return dispatch(words, config, file, std::cerr, format);
}

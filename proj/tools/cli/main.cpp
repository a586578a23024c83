#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "lambda_mixer/errors.hpp"

namespace {

int usage_error(const std::string& message) {
  std::cerr << nlohmann::json{{"error", "UsageError"}, {"message", message}}.dump() << '\n';
  return lambda_mixer::cli::kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lambda_mixer;
  using namespace lambda_mixer::cli;

  CLI::App app{"Four-wave mixing in double-lambda media", "lambda-mixer"};
  std::string command;
  std::string config_path;
  std::string out_path;
  app.add_option("command", command, "eigen | simulate | sweep | validate")
      ->required()
      ->check(CLI::IsMember({"eigen", "simulate", "sweep", "validate"}));
  app.add_option("--config", config_path, "key = value run configuration")->required();
  app.add_option("--out", out_path, "artifact path (overrides output_path; '-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  RunConfig config;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return usage_error("cannot read config file '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    config = parse_config(text.str());
  } catch (const ConfigError& e) {
    write_error_record(std::cerr, e);
    return kExitConfig;
  }
  if (!out_path.empty()) config.output_path = out_path;

  // Buffer the artifact so a failed run leaves no partial file behind.
  std::ostringstream artifact;
  const int status = run_command(*parse_command(command), config, artifact, std::cerr);
  if (status != kExitOk && status != kExitValidation) return status;

  if (config.output_path.empty() || config.output_path == "-") {
    std::cout << artifact.str() << std::flush;
  } else {
    std::ofstream out(config.output_path, std::ios::binary | std::ios::trunc);
    out << artifact.str();
    if (!out.flush()) return usage_error("cannot write '" + config.output_path + "'");
  }
  return status;
}

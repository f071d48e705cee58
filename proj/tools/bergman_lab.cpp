#include <CLI11.hpp>
#include <cstdlib>
#include <string>
#include <thread>

#include "bergman/report.hpp"

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("BERGMAN_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bergman-lab: weighted Bergman kernel experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  std::string out_path;
  std::string format;
  int threads = 0;
  run_cmd->add_option("config", config_path, "Path to the experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_path, "Report output path (defaults to the config's)");
  run_cmd->add_option("--format", format, "Report format: json or csv");
  run_cmd->add_option("--threads", threads,
                      "Worker threads (overrides BERGMAN_LAB_THREADS; default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return bergman::cli::run(config_path, out_path, format, resolve_threads(threads));
}

#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using viralcm::cli::RunConfig;

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> values;
  bool dump_graph = false;
};

void add_run_options(Subcommand& sc) {
  sc.app->add_option("--config", sc.config_path, "key=value run file; flags override it")
      ->check(CLI::ExistingFile);
  for (const std::string& key : RunConfig::keys()) {
    if (key == "dump_graph") continue;
    sc.app->add_option(flag_name(key), sc.values[key]);
  }
  sc.app->add_flag("--dump-graph", sc.dump_graph, "simulate: also write graph.txt");
}

RunConfig resolve(const Subcommand& sc) {
  RunConfig cfg = sc.config_path.empty() ? RunConfig{} : RunConfig::load(sc.config_path);
  for (const auto& [key, value] : sc.values) {
    if (sc.app->count(flag_name(key)) > 0) cfg.set(key, value);
  }
  if (sc.dump_graph) cfg.dump_graph = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence diffusion on configuration-model graphs with transmitter half-edges"};
  app.require_subcommand(1);

  Subcommand simulate{app.add_subcommand("simulate", "build one graph and measure every pioneer's reach")};
  Subcommand sweep{app.add_subcommand("sweep", "simulated, semi-analytic and analytic fractions over a grid")};
  Subcommand analytic{app.add_subcommand("analytic", "conditions, roots, fractions and branching check")};
  Subcommand evaluate{app.add_subcommand("evaluate", "campaign verdict from a pioneer CSV")};
  for (Subcommand* sc : {&simulate, &sweep, &analytic, &evaluate}) add_run_options(*sc);
  std::string csv_path;
  evaluate.app->add_option("csv", csv_path, "pioneer CSV (degree,transmitter_degree)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::filesystem::path> written;
    if (*simulate.app) {
      written = viralcm::cli::cmd_simulate(resolve(simulate));
    } else if (*sweep.app) {
      written = viralcm::cli::cmd_sweep(resolve(sweep));
    } else if (*analytic.app) {
      written = viralcm::cli::cmd_analytic(resolve(analytic));
    } else {
      RunConfig cfg = resolve(evaluate);
      if (!csv_path.empty()) cfg.input = csv_path;
      written = viralcm::cli::cmd_evaluate(cfg);
    }
    for (const auto& path : written) std::cout << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

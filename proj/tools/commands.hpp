#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "run_config.hpp"

namespace viralcm::cli {

/// One sweep row; missing values are empty.
struct SweepRow {
  double param = 0.0;
  double alpha_sim = 0.0;
  double alpha_bar_sim = 0.0;
  std::optional<double> alpha_semianalytic;
  std::optional<double> alpha_bar_semianalytic;
  std::optional<double> alpha_analytic;
  std::optional<double> alpha_bar_analytic;
};

/// Grid point i uses run seed (seed ^ i); rows come back in grid order.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

nlohmann::json analysis_json(const RunConfig& cfg);

/// Each command writes its files under cfg.out and returns their paths.
/// Failures throw; nothing is reported as written unless it was flushed.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_analytic(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_evaluate(const RunConfig& cfg);

}  // namespace viralcm::cli

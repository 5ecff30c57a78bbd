#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "viralcm/analytic.hpp"

namespace viralcm {

/// One-sided z-test on a sample mean.
struct TestResult {
  double stat = 0.0;       // sample mean of the per-pioneer statistic
  double std_error = 0.0;  // sample standard deviation / sqrt(N)
  bool pass = false;       // stat - z * std_error > 0
};

/// Mean of D_i^2 - 2 D_i: is the network connected enough to carry a campaign?
/// Requires N >= 2.
TestResult fragmentation_test(std::span<const NodeDegrees> sample, double z);

/// Mean of D_i D_i(t) - D_i - D_i(t): does the campaign spread? Requires N >= 2.
TestResult effectiveness_test(std::span<const NodeDegrees> sample, double z);

/// Plug-in estimates from the empirical generating functions.
struct FractionEstimate {
  RootResult xi_hat;
  RootResult xi_bar_hat;
  double alpha_hat = 0.0;
  double alpha_bar_hat = 0.0;

  bool has_roots() const {
    return xi_hat.evaluation_point().has_value() && xi_bar_hat.evaluation_point().has_value();
  }
};

FractionEstimate estimate_fractions(std::span<const NodeDegrees> sample);

enum class Verdict { kFragmented, kIneffective, kViable, kInconclusive };
std::string_view to_string(Verdict v);

struct CampaignConfig {
  double z = 2.33;  // one-sided, about 99%
  double cost_per_pioneer = 1.0;
  double value_per_influenced = 0.0;
  std::optional<double> population;  // network size, for reach valuation
  std::vector<unsigned> tries = {1, 2, 5, 10, 20, 50};
};

struct CostBenefit {
  double expected_tries = 0.0;  // 1 / alpha_bar_hat
  double expected_cost = 0.0;   // cost_per_pioneer * expected_tries
  /// (k, 1 - (1 - alpha_bar_hat)^k): chance of a good pioneer within k tries.
  std::vector<std::pair<unsigned, double>> success_after;
  std::optional<double> expected_reach;  // alpha_hat * population
  std::optional<double> reach_value;
  std::optional<double> net_value;
};

CostBenefit cost_benefit(double alpha_hat, double alpha_bar_hat, const CampaignConfig& config);

struct EstimationReport {
  std::size_t n_samples = 0;
  CampaignConfig config;
  std::optional<TestResult> fragmentation;
  std::optional<TestResult> effectiveness;
  std::optional<FractionEstimate> fractions;
  std::optional<CostBenefit> cost;
  Verdict verdict = Verdict::kInconclusive;
};

/// Fragmentation, then effectiveness, then fraction estimates; stops at the
/// first failing stage.
EstimationReport evaluate_campaign(std::span<const NodeDegrees> sample,
                                   const CampaignConfig& config = {});

}  // namespace viralcm

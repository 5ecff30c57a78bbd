#include "viralcm/estimators.hpp"

#include <cmath>

namespace viralcm {

namespace {

template <class Stat>
TestResult mean_test(std::span<const NodeDegrees> sample, double z, Stat stat) {
  if (sample.size() < 2) throw DomainError("test needs at least two pioneers");
  // Welford keeps the variance accurate for heavy-tailed degree samples.
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (const NodeDegrees& node : sample) {
    const double v = stat(static_cast<double>(node.total), static_cast<double>(node.transmitter));
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(sample.size());
  TestResult r;
  r.stat = mean;
  r.std_error = std::sqrt(m2 / (n - 1.0) / n);
  r.pass = r.stat - z * r.std_error > 0.0;
  return r;
}

}  // namespace

TestResult fragmentation_test(std::span<const NodeDegrees> sample, double z) {
  return mean_test(sample, z, [](double d, double) { return d * d - 2.0 * d; });
}

TestResult effectiveness_test(std::span<const NodeDegrees> sample, double z) {
  return mean_test(sample, z, [](double d, double t) { return d * t - d - t; });
}

FractionEstimate estimate_fractions(std::span<const NodeDegrees> sample) {
  const GenFnBundle bundle = build_genfns(sample);
  FractionEstimate est;
  est.xi_hat = find_root(bundle, RootKind::kH);
  est.xi_bar_hat = find_root(bundle, RootKind::kHbar);
  const AnalyticResult r = fractions(bundle, est.xi_hat, est.xi_bar_hat, RootResult{});
  est.alpha_hat = r.alpha;
  est.alpha_bar_hat = r.alpha_bar;
  return est;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kFragmented: return "fragmented";
    case Verdict::kIneffective: return "ineffective";
    case Verdict::kViable: return "viable";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

CostBenefit cost_benefit(double alpha_hat, double alpha_bar_hat, const CampaignConfig& config) {
  if (!(alpha_bar_hat > 0.0)) throw DomainError("cost_benefit: good-pioneer fraction must be positive");
  CostBenefit cb;
  cb.expected_tries = 1.0 / alpha_bar_hat;
  cb.expected_cost = config.cost_per_pioneer * cb.expected_tries;
  for (unsigned k : config.tries) {
    cb.success_after.emplace_back(k, -std::expm1(k * std::log1p(-alpha_bar_hat)));
  }
  if (config.population) {
    cb.expected_reach = alpha_hat * *config.population;
    cb.reach_value = config.value_per_influenced * *cb.expected_reach;
    cb.net_value = *cb.reach_value - cb.expected_cost;
  }
  return cb;
}

EstimationReport evaluate_campaign(std::span<const NodeDegrees> sample, const CampaignConfig& config) {
  EstimationReport report;
  report.n_samples = sample.size();
  report.config = config;
  if (sample.size() < 2) return report;

  report.fragmentation = fragmentation_test(sample, config.z);
  if (!report.fragmentation->pass) {
    report.verdict = Verdict::kFragmented;
    return report;
  }
  report.effectiveness = effectiveness_test(sample, config.z);
  if (!report.effectiveness->pass) {
    report.verdict = Verdict::kIneffective;
    return report;
  }
  report.fractions = estimate_fractions(sample);
  if (!report.fractions->has_roots() || !(report.fractions->alpha_bar_hat > 0.0)) {
    report.verdict = Verdict::kInconclusive;
    return report;
  }
  report.cost = cost_benefit(report.fractions->alpha_hat, report.fractions->alpha_bar_hat, config);
  report.verdict = Verdict::kViable;
  return report;
}

}  // namespace viralcm

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "viralcm/analytic.hpp"
#include "viralcm/diffusion.hpp"
#include "viralcm/estimators.hpp"
#include "viralcm/population.hpp"
#include "viralcm/rng.hpp"

using namespace viralcm;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += failures.empty() ? what : "; " + what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<void(Outcome&)> run;
};

JointDegreeLaw poisson_law(double lambda, const TransmissionModel& model) {
  return JointDegreeLaw(DegreeLaw::poisson(lambda), model);
}

// Same stream layout as the simulate command: sample 1, graph 2.
DiffusionOutcome simulate(const JointDegreeLaw& law, std::size_t n, std::uint64_t seed) {
  const DegreeSample sample = law.sample(n, derive_seed(seed, 1));
  return all_reach(EnhancedGraph::build(sample, derive_seed(seed, 2)));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Root of 1 - a = exp(-lambda a) in (0, 1] by bisection in long double.
long double giant_fixed_point(long double lambda) {
  long double lo = 1e-6L, hi = 1.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    ((1.0L - mid) - std::exp(-lambda * mid) > 0.0L ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

std::vector<std::pair<double, double>> lambda_p_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double lambda : {0.8, 1.5, 2.0, 4.0, 6.0}) {
    for (int i = 1; i <= 10; ++i) grid.emplace_back(lambda, 0.1 * i);
  }
  return grid;
}

void phase_transition(Outcome& o) {
  int checked = 0;
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const double alpha = analyze(poisson_law(2.0, TransmissionModel::bernoulli(p))).alpha;
    if (p <= 0.5) o.require(alpha == 0.0, "alpha(" + std::to_string(p) + ") > 0");
    if (p >= 0.52) o.require(alpha > 0.0, "alpha(" + std::to_string(p) + ") = 0");
    ++checked;
  }
  o.detail << "grid points=" << checked
           << " alpha(0.52)=" << analyze(poisson_law(2.0, TransmissionModel::bernoulli(0.52))).alpha;
}

void giant_component(Outcome& o) {
  const double oracle = static_cast<double>(giant_fixed_point(2.0L));
  const AnalyticResult a = analyze(poisson_law(2.0, TransmissionModel::bernoulli(1.0)));
  o.require(std::abs(a.alpha0 - oracle) < 1e-6, "alpha0 off oracle");
  o.require(std::abs(a.alpha - oracle) < 1e-6, "alpha off oracle");
  o.require(std::abs(oracle - 0.7968) < 1e-4, "oracle not 0.7968");
  const DiffusionOutcome sim = simulate(poisson_law(2.0, TransmissionModel::bernoulli(1.0)), 10000, 1);
  o.require(std::abs(sim.alpha_hat_sim - oracle) < 0.02, "simulation off oracle");
  o.detail << "oracle=" << oracle << " alpha0=" << a.alpha0 << " sim=" << sim.alpha_hat_sim;
}

void bernoulli_symmetry(Outcome& o) {
  double worst = 0.0;
  for (const auto& [lambda, p] : lambda_p_grid()) {
    const AnalyticResult a = analyze(poisson_law(lambda, TransmissionModel::bernoulli(p)));
    worst = std::max(worst, std::abs(a.alpha - a.alpha_bar));
  }
  o.require(worst < 1e-9, "analytic asymmetry");
  double worst_sim = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DiffusionOutcome sim = simulate(poisson_law(2.0, TransmissionModel::bernoulli(0.8)), 10000, seed);
    worst_sim = std::max(worst_sim, std::abs(sim.alpha_hat_sim - sim.alpha_bar_hat_sim));
  }
  o.require(worst_sim < 0.03, "simulated asymmetry");
  o.detail << "max analytic gap=" << worst << " max simulated gap=" << worst_sim;
}

void node_percolation(Outcome& o) {
  double worst = 0.0;
  for (const auto& [lambda, p] : lambda_p_grid()) {
    const AnalyticResult a = analyze(poisson_law(lambda, TransmissionModel::node_percolation(p)));
    worst = std::max(worst, std::abs(a.alpha_bar - p * a.alpha));
  }
  o.require(worst < 1e-9, "analytic alpha_bar != p alpha");
  double worst_sim = 0.0;
  const double p = 0.8;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DiffusionOutcome sim = simulate(poisson_law(2.0, TransmissionModel::node_percolation(p)), 10000, seed);
    worst_sim = std::max(worst_sim, std::abs(sim.alpha_bar_hat_sim - p * sim.alpha_hat_sim));
  }
  o.require(worst_sim < 0.03, "simulated alpha_bar != p alpha");
  o.detail << "max analytic gap=" << worst << " max simulated gap=" << worst_sim;
}

void power_law_regime(Outcome& o) {
  const JointDegreeLaw low(DegreeLaw::power_law(2.45), TransmissionModel::bernoulli(0.05));
  const double alpha_low = analyze(low).alpha;
  o.require(alpha_low > 0.0, "beta=2.45 alpha(0.05) = 0");
  for (int i = 1; i <= 20; ++i) {
    const double p = 0.05 * i;
    o.require(analyze(JointDegreeLaw(DegreeLaw::power_law(2.45), TransmissionModel::bernoulli(p))).alpha > 0.0,
              "beta=2.45 alpha(" + std::to_string(p) + ") = 0");
  }
  const double threshold = boost::math::zeta(2.2) / (boost::math::zeta(1.2) - boost::math::zeta(2.2));
  o.require(std::abs(bernoulli_threshold(DegreeLaw::power_law(3.2)) - threshold) < 1e-9, "threshold mismatch");
  const auto at = [](double p) {
    return analyze(JointDegreeLaw(DegreeLaw::power_law(3.2), TransmissionModel::bernoulli(p)));
  };
  const AnalyticResult below = at(0.98 * threshold), above = at(1.02 * threshold);
  o.require(!below.viral_condition && below.alpha == 0.0, "viral below threshold");
  o.require(above.viral_condition && above.alpha > 0.0, "not viral above threshold");
  o.detail << "alpha(0.05)=" << alpha_low << " p_c(3.2)=" << threshold << " alpha(1.02 p_c)=" << above.alpha;
}

void coupon_collector(Outcome& o) {
  const JointDegreeLaw law = poisson_law(2.0, TransmissionModel::coupon_collector(2));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DiffusionOutcome sim = simulate(law, 10000, seed);
    o.require(sim.alpha_bar_hat_sim > sim.alpha_hat_sim, "seed " + std::to_string(seed) + " good <= influenced");
    o.detail << "seed " << seed << " good=" << sim.alpha_bar_hat_sim << " influenced=" << sim.alpha_hat_sim << ", ";
  }
  o.detail << "viral margin=" << viral_margin(law.moments());
}

void branching(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0, skipped = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double u = unit(rng);
    const TransmissionModel model = i % 3 == 0   ? TransmissionModel::bernoulli(u)
                                    : i % 3 == 1 ? TransmissionModel::node_percolation(u)
                                                 : TransmissionModel::coupon_collector(1 + static_cast<unsigned>(u * 6));
    const DegreeLaw degree = i % 4 == 3 ? DegreeLaw::power_law(2.1 + 2.0 * unit(rng))
                                        : DegreeLaw::poisson(0.5 + 5.0 * unit(rng));
    const JointDegreeLaw law(degree, model);
    const AnalyticResult a = analyze(law);
    if (a.viral_critical) {
      ++skipped;
      continue;
    }
    const BranchingCheck bc = branching_crosscheck(law);
    o.require(bc.supercritical == a.viral_condition, "flag mismatch for " + law.name());
    const double via_pgf = 1.0 - build_genfns(law).transmitter_pgf(bc.extinction_probability);
    worst = std::max(worst, std::abs(via_pgf - a.alpha_bar));
    ++checked;
  }
  o.require(worst < 1e-9, "1 - G_Dt(p_ext) != alpha_bar");
  o.detail << "configs=" << checked << " critical skipped=" << skipped << " max gap=" << worst;
}

void three_tracks(Outcome& o) {
  const JointDegreeLaw law = poisson_law(2.0, TransmissionModel::bernoulli(0.8));
  const double alpha = analyze(law).alpha;
  std::vector<double> semi, sim;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DegreeSample sample = law.sample(1000, derive_seed(seed, 1));
    semi.push_back(std::abs(estimate_fractions(sample).alpha_hat - alpha));
    sim.push_back(std::abs(all_reach(EnhancedGraph::build(sample, derive_seed(seed, 2))).alpha_hat_sim - alpha));
  }
  o.require(median(semi) < 0.05, "semi-analytic median error");
  o.require(median(sim) < 0.05, "simulation median error");
  o.detail << "alpha=" << alpha << " median semi err=" << median(semi) << " median sim err=" << median(sim);
}

void closure_oracle(Outcome& o) {
  const std::vector<JointDegreeLaw> laws = {
      poisson_law(2.0, TransmissionModel::bernoulli(0.8)), poisson_law(3.0, TransmissionModel::bernoulli(0.4)),
      poisson_law(2.5, TransmissionModel::node_percolation(0.7)), poisson_law(2.0, TransmissionModel::coupon_collector(3)),
      JointDegreeLaw(DegreeLaw::power_law(2.45), TransmissionModel::bernoulli(0.7))};
  int mismatches = 0;
  for (std::uint64_t g = 0; g < 500; ++g) {
    const std::size_t n = 1 + g % 12;
    const EnhancedGraph graph = EnhancedGraph::build(laws[g % laws.size()].sample(n, g + 1), g + 1);
    // Reflexive-transitive closure by repeated boolean squaring.
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (Node u = 0; u < n; ++u) {
      r[u][u] = true;
      for (Node v : graph.out_neighbors(u)) r[u][v] = true;
    }
    for (std::size_t len = 1; len < n; len *= 2) {
      auto next = r;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          if (!r[i][k]) continue;
          for (std::size_t j = 0; j < n; ++j) next[i][j] = next[i][j] || r[k][j];
        }
      }
      r = std::move(next);
    }
    for (Node u = 0; u < n; ++u) {
      std::vector<Node> forward, backward;
      for (Node v = 0; v < n; ++v) {
        if (r[u][v]) forward.push_back(v);
        if (r[v][u]) backward.push_back(v);
      }
      mismatches += influenced_set(graph, u) != forward;
      mismatches += reverse_reach(graph, u) != backward;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatching sets");
  o.detail << "graphs=500 mismatches=" << mismatches;
}

void estimator_identity(Outcome& o) {
  const std::vector<JointDegreeLaw> laws = {
      poisson_law(2.0, TransmissionModel::bernoulli(0.8)), poisson_law(0.7, TransmissionModel::node_percolation(0.3)),
      poisson_law(5.0, TransmissionModel::coupon_collector(4)),
      JointDegreeLaw(DegreeLaw::power_law(2.45), TransmissionModel::bernoulli(0.5))};
  int nonzero = 0;
  for (std::uint64_t s = 1; s <= 1000; ++s) {
    const GenFnBundle b = build_genfns(laws[s % laws.size()].sample(1 + s % 500, s));
    nonzero += eval_H(b, 1.0) != 0.0 || eval_Hbar(b, 1.0) != 0.0;
  }
  o.require(nonzero == 0, std::to_string(nonzero) + " samples with nonzero value at 1");
  o.detail << "samples=1000 nonzero=" << nonzero;
}

void concentration(Outcome& o) {
  const JointDegreeLaw law = poisson_law(2.0, TransmissionModel::bernoulli(0.8));
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DiffusionOutcome sim = simulate(law, 1000, seed);
    if (sim.good_pioneers.empty()) {
      o.require(false, "no good pioneers for seed " + std::to_string(seed));
      continue;
    }
    double mean = 0.0, sq = 0.0;
    for (Node v : sim.good_pioneers) mean += static_cast<double>(sim.reach_sizes[v]);
    mean /= static_cast<double>(sim.good_pioneers.size());
    for (Node v : sim.good_pioneers) sq += std::pow(static_cast<double>(sim.reach_sizes[v]) - mean, 2);
    worst = std::max(worst, std::sqrt(sq / static_cast<double>(sim.good_pioneers.size())) / mean);
  }
  o.require(worst < 0.1, "coefficient of variation too large");
  o.detail << "max cv over 5 seeds=" << worst;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "phase transition at p = 1/lambda (Poisson, Bernoulli)", 1.0, phase_transition},
      {2, "giant component fixed point, analytic and n=1e4 simulation", 10.0, giant_component},
      {3, "Bernoulli symmetry alpha = alpha_bar", 120.0, bernoulli_symmetry},
      {4, "node percolation alpha_bar = p alpha", 0.0, node_percolation},
      {5, "power-law regime and beta=3.2 threshold", 0.0, power_law_regime},
      {6, "coupon collector K=2: good pioneers exceed influenced (n=1e4, 5 seeds)", 0.0, coupon_collector},
      {7, "branching cross-check on 100 configurations", 0.0, branching},
      {8, "three-track agreement, n=1000, 20 seeds", 0.0, three_tracks},
      {9, "reach sets equal transitive closure on 500 graphs", 0.0, closure_oracle},
      {10, "empirical H and Hbar vanish at 1 on 1000 samples", 0.0, estimator_identity},
      {11, "concentration of good-pioneer reach, cv < 0.1", 0.0, concentration},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0) o.require(seconds < c.time_limit_s, "over time limit");
    failed += !o.pass;
    std::printf("%s criterion %2d: %s (%.2f s) %s%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                o.detail.str().c_str(), o.failures.empty() ? "" : " | failed: ", o.failures.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

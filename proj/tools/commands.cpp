#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "viralcm/graph.hpp"
#include "viralcm/io.hpp"

namespace viralcm::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kGraphStream = 2;
constexpr std::uint64_t kPioneerStream = 3;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

fs::path prepare_out(const RunConfig& cfg, std::vector<fs::path>& written) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file(dir / "run.cfg", cfg.to_text());
  written.push_back(dir / "run.cfg");
  return dir;
}

nlohmann::json envelope(const RunConfig& cfg, const char* command) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"seed", cfg.seed},
          {"config", cfg.to_json()}};
}

/// Provenance header for CSV outputs.
std::string csv_preamble(const RunConfig& cfg, const char* command) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << '\n' << "# command=" << command << '\n';
  for (const std::string& key : RunConfig::keys()) os << "# " << key << '=' << cfg.get(key) << '\n';
  return os.str();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

unsigned worker_count(const RunConfig& cfg, std::size_t jobs) {
  unsigned t = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid.points();
  const DegreeLaw degree = cfg.degree_law();
  const bool analytic = cfg.trans != "coupon";
  std::vector<SweepRow> rows(grid.size());

  auto job = [&](std::size_t i) {
    const std::uint64_t seed = cfg.seed ^ i;
    const JointDegreeLaw law(degree, cfg.transmission_at(grid[i]));
    const DegreeSample sample = law.sample(cfg.n, derive_seed(seed, kSampleStream));
    const EnhancedGraph g = EnhancedGraph::build(sample, derive_seed(seed, kGraphStream));
    const DiffusionOutcome outcome = all_reach(g, cfg.rule(), 1);

    SweepRow& row = rows[i];
    row.param = grid[i];
    row.alpha_sim = outcome.alpha_hat_sim;
    row.alpha_bar_sim = outcome.alpha_bar_hat_sim;
    const FractionEstimate est = estimate_fractions(sample);
    if (est.xi_hat.status != RootStatus::kNonBracketing) row.alpha_semianalytic = est.alpha_hat;
    if (est.xi_bar_hat.status != RootStatus::kNonBracketing) row.alpha_bar_semianalytic = est.alpha_bar_hat;
    if (analytic) {
      const AnalyticResult a = analyze(law);
      if (a.xi.status != RootStatus::kNonBracketing) row.alpha_analytic = a.alpha;
      if (a.xi_bar.status != RootStatus::kNonBracketing) row.alpha_bar_analytic = a.alpha_bar;
    }
  };

  const unsigned workers = worker_count(cfg, grid.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < grid.size(); i = next++) job(i);
    } catch (...) {
      errors[w] = std::current_exception();
      next = grid.size();
    }
  };
  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

nlohmann::json analysis_json(const RunConfig& cfg) {
  const JointDegreeLaw law = cfg.joint_law();
  const GenFnBundle bundle = build_genfns(law);
  const AnalyticResult result = analyze(bundle);

  nlohmann::json j = envelope(cfg, "analytic");
  j["law"] = law.name();
  j["moments"] = to_json(bundle.moments);
  j["conditions"] = {
      {"viral_margin", finite_or_null(viral_margin(bundle.moments))},
      {"giant_margin", finite_or_null(giant_margin(bundle.moments))},
      {"viral", result.viral_condition},
      {"giant", result.giant_condition},
  };
  const double threshold = bernoulli_threshold(law.degree());
  j["thresholds"] = {{"bernoulli_p", finite_or_null(threshold)}};
  j["result"] = to_json(result);
  try {
    j["branching"] = to_json(branching_crosscheck(law));
  } catch (const std::exception& e) {
    j["branching"] = {{"error", e.what()}};
  }
  return j;
}

std::vector<fs::path> cmd_simulate(const RunConfig& cfg) {
  cfg.validate("simulate");
  const JointDegreeLaw law = cfg.joint_law();
  const DegreeSample sample = law.sample(cfg.n, derive_seed(cfg.seed, kSampleStream));
  const EnhancedGraph g = EnhancedGraph::build(sample, derive_seed(cfg.seed, kGraphStream));
  std::vector<fs::path> written;
  const fs::path dir = prepare_out(cfg, written);

  nlohmann::json j = envelope(cfg, "simulate");
  j["law"] = law.name();
  j["graph_seed"] = g.seed();
  j["parity_fixed"] = g.parity_fixed();
  j["params"] = {{"gamma", cfg.gamma}, {"floor", cfg.floor}, {"n", cfg.n}};

  if (cfg.pioneers == 0) {
    const DiffusionOutcome outcome = all_reach(g, cfg.rule(), cfg.threads);
    nlohmann::json o = to_json(outcome);
    o.erase("seed");
    j.update(o);
    write_file(dir / "outcome.json", dump(j));
    written.push_back(dir / "outcome.json");

    std::ostringstream csv;
    csv << csv_preamble(cfg, "simulate") << "size_fraction,count\n";
    for (const auto& [fraction, count] : outcome.reach_histogram) csv << fmt(fraction) << ',' << count << '\n';
    write_file(dir / "reach_histogram.csv", csv.str());
    written.push_back(dir / "reach_histogram.csv");
  } else {
    const SampledReach s = sample_reach(g, cfg.pioneers, derive_seed(cfg.seed, kPioneerStream), cfg.rule());
    j["n"] = g.node_count();
    j["sampled"] = {{"pioneers", s.pioneers},           {"good", s.good},
                    {"alpha_bar_low", s.alpha_bar_low}, {"alpha_bar_high", s.alpha_bar_high}};
    j["alpha_hat_sim"] = s.alpha_hat;
    j["alpha_bar_hat_sim"] = s.alpha_bar_hat;
    write_file(dir / "outcome.json", dump(j));
    written.push_back(dir / "outcome.json");
  }

  if (cfg.dump_graph) {
    std::ostringstream os;
    write_edge_list(os, g);
    write_file(dir / "graph.txt", os.str());
    written.push_back(dir / "graph.txt");
  }
  return written;
}

std::vector<fs::path> cmd_sweep(const RunConfig& cfg) {
  cfg.validate("sweep");
  const std::vector<SweepRow> rows = run_sweep(cfg);
  std::ostringstream csv;
  csv << csv_preamble(cfg, "sweep")
      << "param,alpha_sim,alpha_bar_sim,alpha_semianalytic,alpha_bar_semianalytic,"
         "alpha_analytic,alpha_bar_analytic\n";
  for (const SweepRow& r : rows) {
    csv << fmt(r.param) << ',' << fmt(r.alpha_sim) << ',' << fmt(r.alpha_bar_sim) << ','
        << fmt(r.alpha_semianalytic) << ',' << fmt(r.alpha_bar_semianalytic) << ','
        << fmt(r.alpha_analytic) << ',' << fmt(r.alpha_bar_analytic) << '\n';
  }
  std::vector<fs::path> written;
  const fs::path dir = prepare_out(cfg, written);
  write_file(dir / "sweep.csv", csv.str());
  written.push_back(dir / "sweep.csv");
  return written;
}

std::vector<fs::path> cmd_analytic(const RunConfig& cfg) {
  cfg.validate("analytic");
  const nlohmann::json j = analysis_json(cfg);
  std::vector<fs::path> written;
  const fs::path dir = prepare_out(cfg, written);
  write_file(dir / "analysis.json", dump(j));
  written.push_back(dir / "analysis.json");
  return written;
}

std::vector<fs::path> cmd_evaluate(const RunConfig& cfg) {
  cfg.validate("evaluate");
  std::ifstream in(cfg.input);
  if (!in) throw ConfigError("input", "cannot open " + cfg.input);
  DegreeSample sample;
  try {
    sample = read_degree_csv(in);
  } catch (const CsvError& e) {
    throw ConfigError("input", cfg.input + ": " + e.what());
  }
  const EstimationReport report = evaluate_campaign(sample, cfg.campaign());
  nlohmann::json j = envelope(cfg, "evaluate");
  j["report"] = to_json(report);
  std::vector<fs::path> written;
  const fs::path dir = prepare_out(cfg, written);
  write_file(dir / "report.json", dump(j));
  written.push_back(dir / "report.json");
  return written;
}

}  // namespace viralcm::cli

#include "viralcm/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

namespace viralcm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_count(std::string_view field, std::size_t line, const char* column) {
  field = trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw CsvError(line, std::string(column) + " is not an integer: '" + std::string(field) + "'");
  }
  if (value < 0) throw CsvError(line, std::string(column) + " is negative");
  return value;
}

// JSON has no infinity; divergent quantities are written as null.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

DegreeSample read_degree_csv(std::istream& in) {
  DegreeSample sample;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      if (text != "degree,transmitter_degree") {
        throw CsvError(line, "expected header 'degree,transmitter_degree'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw CsvError(line, "expected exactly two fields");
    }
    NodeDegrees node;
    node.total = parse_count(text.substr(0, comma), line, "degree");
    node.transmitter = parse_count(text.substr(comma + 1), line, "transmitter_degree");
    if (node.transmitter > node.total) throw CsvError(line, "transmitter_degree exceeds degree");
    sample.push_back(node);
  }
  if (!header_seen) throw CsvError(line, "missing header");
  return sample;
}

void write_degree_csv(std::ostream& out, std::span<const NodeDegrees> sample) {
  out << "degree,transmitter_degree\n";
  for (const NodeDegrees& node : sample) out << node.total << ',' << node.transmitter << '\n';
}

nlohmann::json to_json(const RootResult& r) {
  nlohmann::json j = {{"status", std::string(to_string(r.status))}, {"residual", r.residual}};
  j["root"] = r.root ? nlohmann::json(*r.root) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const AnalyticResult& r) {
  return {
      {"viral_condition", r.viral_condition},
      {"giant_condition", r.giant_condition},
      {"viral_critical", r.viral_critical},
      {"giant_critical", r.giant_critical},
      {"xi", to_json(r.xi)},
      {"xi_bar", to_json(r.xi_bar)},
      {"xi0", to_json(r.xi0)},
      {"alpha", r.alpha},
      {"alpha_bar", r.alpha_bar},
      {"alpha0", r.alpha0},
  };
}

nlohmann::json to_json(const BranchingCheck& b) {
  return {
      {"supercritical", b.supercritical},
      {"offspring_mean", number(b.offspring_mean)},
      {"extinction_probability", b.extinction_probability},
      {"alpha_bar_bp", b.alpha_bar_bp},
      {"offspring_pgf_source", b.from_size_biased_atoms ? "size_biased_atoms" : "bundle"},
  };
}

nlohmann::json to_json(const Moments& m) {
  return {
      {"E[D]", number(m.total_mean)},
      {"E[D^2]", number(m.total_second)},
      {"E[Dt]", number(m.transmitter_mean)},
      {"E[Dt*D]", number(m.mixed)},
      {"E[Dr]", number(m.receiver_mean)},
  };
}

nlohmann::json to_json(const TestResult& t) {
  return {{"stat", t.stat}, {"stderr", t.std_error}, {"pass", t.pass}};
}

nlohmann::json to_json(const FractionEstimate& f) {
  return {
      {"xi_hat", to_json(f.xi_hat)},
      {"xi_bar_hat", to_json(f.xi_bar_hat)},
      {"alpha_hat", f.alpha_hat},
      {"alpha_bar_hat", f.alpha_bar_hat},
  };
}

nlohmann::json to_json(const CostBenefit& c) {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [k, p] : c.success_after) curve.push_back({k, p});
  nlohmann::json j = {
      {"expected_tries", c.expected_tries},
      {"expected_cost", c.expected_cost},
      {"success_after_tries", curve},
  };
  j["expected_reach"] = c.expected_reach ? nlohmann::json(*c.expected_reach) : nlohmann::json(nullptr);
  j["reach_value"] = c.reach_value ? nlohmann::json(*c.reach_value) : nlohmann::json(nullptr);
  j["net_value"] = c.net_value ? nlohmann::json(*c.net_value) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EstimationReport& r) {
  nlohmann::json j = {
      {"n_samples", r.n_samples},
      {"verdict", std::string(to_string(r.verdict))},
      {"z", r.config.z},
  };
  j["fragmentation"] = r.fragmentation ? to_json(*r.fragmentation) : nlohmann::json(nullptr);
  j["effectiveness"] = r.effectiveness ? to_json(*r.effectiveness) : nlohmann::json(nullptr);
  j["fractions"] = r.fractions ? to_json(*r.fractions) : nlohmann::json(nullptr);
  j["cost_benefit"] = r.cost ? to_json(*r.cost) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const DiffusionOutcome& o) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [fraction, count] : o.reach_histogram) hist.push_back({fraction, count});
  return {
      {"n", o.n},
      {"seed", o.seed},
      {"alpha_hat_sim", o.alpha_hat_sim},
      {"alpha_bar_hat_sim", o.alpha_bar_hat_sim},
      {"good_pioneers", o.good_pioneers.size()},
      {"classification", {{"gamma", o.rule.gamma}, {"floor", o.rule.floor}}},
      {"histogram", hist},
  };
}

}  // namespace viralcm

#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "viralcm/io.hpp"

namespace viralcm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

template <class T>
T parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

const char* unit_of(const std::string& key) {
  if (key == "lambda") return "mean degree, edges per node";
  if (key == "beta") return "power-law exponent, > 2";
  if (key == "p") return "probability";
  if (key == "K") return "friend picks per node";
  if (key == "n") return "nodes";
  if (key == "grid") return "start:stop:step of p (or K for coupon), inclusive";
  if (key == "gamma") return "fraction of the largest reach";
  if (key == "floor") return "fraction of n";
  if (key == "z") return "standard errors, one-sided";
  if (key == "cost_per_pioneer") return "cost units";
  if (key == "value_per_influenced") return "cost units per influenced node";
  if (key == "population") return "network size in nodes, 0 = unknown";
  if (key == "pioneers") return "sampled pioneers, 0 = all";
  if (key == "threads") return "0 = hardware concurrency";
  return nullptr;
}

}  // namespace

bool operator==(const Grid& a, const Grid& b) {
  return a.start == b.start && a.stop == b.stop && a.step == b.step;
}

std::vector<double> Grid::points() const {
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> pts(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = start + static_cast<double>(i) * step;
  if (std::abs(pts.back() - stop) < 1e-9 * std::max(1.0, std::abs(stop))) pts.back() = stop;
  return pts;
}

std::string Grid::to_string() const {
  return format_double(start) + ":" + format_double(stop) + ":" + format_double(step);
}

Grid Grid::parse(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw ConfigError("grid", "expected start:stop:step, got '" + text + "'");
  }
  Grid g{parse_double("grid", text.substr(0, a)), parse_double("grid", text.substr(a + 1, b - a - 1)),
         parse_double("grid", text.substr(b + 1))};
  if (!(g.step > 0.0)) throw ConfigError("grid", "step must be positive");
  if (g.stop < g.start) throw ConfigError("grid", "stop must not be below start");
  if ((g.stop - g.start) / g.step > 1e6) throw ConfigError("grid", "more than 10^6 points");
  return g;
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "degree", "lambda", "beta",  "degree_csv", "trans",    "p",       "K",
      "n",      "seed",   "grid",  "gamma",      "floor",    "z",       "cost_per_pioneer",
      "value_per_influenced", "population", "pioneers", "threads", "input", "out", "dump_graph"};
  return k;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "degree") {
    if (value != "poisson" && value != "powerlaw" && value != "empirical") {
      throw ConfigError(key, "expected poisson, powerlaw or empirical, got '" + value + "'");
    }
    degree = value;
  } else if (key == "lambda") {
    lambda = parse_double(key, value);
  } else if (key == "beta") {
    beta = parse_double(key, value);
  } else if (key == "degree_csv") {
    degree_csv = value;
  } else if (key == "trans") {
    if (value != "bernoulli" && value != "nodeperc" && value != "coupon") {
      throw ConfigError(key, "expected bernoulli, nodeperc or coupon, got '" + value + "'");
    }
    trans = value;
  } else if (key == "p") {
    p = parse_double(key, value);
  } else if (key == "K") {
    K = parse_unsigned<unsigned>(key, value);
  } else if (key == "n") {
    n = parse_unsigned<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "grid") {
    grid = Grid::parse(value);
  } else if (key == "gamma") {
    gamma = parse_double(key, value);
  } else if (key == "floor") {
    floor = parse_double(key, value);
  } else if (key == "z") {
    z = parse_double(key, value);
  } else if (key == "cost_per_pioneer") {
    cost_per_pioneer = parse_double(key, value);
  } else if (key == "value_per_influenced") {
    value_per_influenced = parse_double(key, value);
  } else if (key == "population") {
    population = parse_unsigned<std::size_t>(key, value);
  } else if (key == "pioneers") {
    pioneers = parse_unsigned<std::size_t>(key, value);
  } else if (key == "threads") {
    threads = parse_unsigned<unsigned>(key, value);
  } else if (key == "input") {
    input = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "dump_graph") {
    dump_graph = parse_bool(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

std::string RunConfig::get(const std::string& key) const {
  if (key == "degree") return degree;
  if (key == "lambda") return format_double(lambda);
  if (key == "beta") return format_double(beta);
  if (key == "degree_csv") return degree_csv;
  if (key == "trans") return trans;
  if (key == "p") return format_double(p);
  if (key == "K") return std::to_string(K);
  if (key == "n") return std::to_string(n);
  if (key == "seed") return std::to_string(seed);
  if (key == "grid") return grid.to_string();
  if (key == "gamma") return format_double(gamma);
  if (key == "floor") return format_double(floor);
  if (key == "z") return format_double(z);
  if (key == "cost_per_pioneer") return format_double(cost_per_pioneer);
  if (key == "value_per_influenced") return format_double(value_per_influenced);
  if (key == "population") return std::to_string(population);
  if (key == "pioneers") return std::to_string(pioneers);
  if (key == "threads") return std::to_string(threads);
  if (key == "input") return input;
  if (key == "out") return out;
  if (key == "dump_graph") return dump_graph ? "true" : "false";
  throw ConfigError(key, "unknown key");
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  for (const std::string& key : keys()) {
    if (const char* unit = unit_of(key)) os << "# " << key << ": " << unit << '\n';
    os << key << '=' << get(key) << '\n';
  }
  return os.str();
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key=value");
    }
    cfg.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  return parse(in);
}

void RunConfig::validate(const std::string& command) const {
  const bool needs_law = command != "evaluate";
  if (needs_law) {
    if (degree == "poisson" && !(lambda > 0.0)) throw ConfigError("lambda", "must be positive");
    if (degree == "powerlaw" && !(beta > 2.0)) throw ConfigError("beta", "must exceed 2");
    if (degree == "empirical" && degree_csv.empty()) {
      throw ConfigError("degree_csv", "required for the empirical degree law");
    }
    if (command != "sweep") {
      if (trans != "coupon" && !(p >= 0.0 && p <= 1.0)) throw ConfigError("p", "must lie in [0, 1]");
      if (trans == "coupon" && K < 1) throw ConfigError("K", "must be at least 1");
    }
    if (trans == "coupon" && degree == "powerlaw" && command != "simulate") {
      const auto limit = PowerLawOccupancy::kMaxTrials;
      const double largest = command == "sweep" ? grid.stop : K;
      if (largest > limit) {
        throw ConfigError(command == "sweep" ? "grid" : "K",
                          "power-law coupon analytics support K <= " + std::to_string(limit));
      }
    }
  }
  if (command == "simulate" || command == "sweep") {
    if (n < 1) throw ConfigError("n", "must be at least 1");
    if (n > std::numeric_limits<Node>::max()) throw ConfigError("n", "too large for 32-bit node ids");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma", "must lie in (0, 1]");
    if (!(floor >= 0.0 && floor < 1.0)) throw ConfigError("floor", "must lie in [0, 1)");
  }
  if (command == "sweep") {
    if (!(grid.step > 0.0) || grid.stop < grid.start) throw ConfigError("grid", "invalid range");
    if (trans == "coupon") {
      for (double k : grid.points()) {
        if (k < 1.0 || std::abs(k - std::round(k)) > 1e-9) {
          throw ConfigError("grid", "coupon sweeps need integer K >= 1");
        }
      }
    } else if (grid.start < 0.0 || grid.stop > 1.0) {
      throw ConfigError("grid", "p values must lie in [0, 1]");
    }
  }
  if (command == "evaluate" || command == "sweep") {
    if (!(z >= 0.0)) throw ConfigError("z", "must be non-negative");
  }
  if (command == "evaluate") {
    if (input.empty()) throw ConfigError("input", "a pioneer CSV is required");
    if (!(cost_per_pioneer >= 0.0)) throw ConfigError("cost_per_pioneer", "must be non-negative");
    if (!(value_per_influenced >= 0.0)) {
      throw ConfigError("value_per_influenced", "must be non-negative");
    }
  }
  if (out.empty()) throw ConfigError("out", "output directory required");
}

DegreeLaw RunConfig::degree_law() const {
  if (degree == "poisson") return DegreeLaw::poisson(lambda);
  if (degree == "powerlaw") return DegreeLaw::power_law(beta);
  std::ifstream in(degree_csv);
  if (!in) throw ConfigError("degree_csv", "cannot open " + degree_csv);
  DegreeSample sample;
  try {
    sample = read_degree_csv(in);
  } catch (const CsvError& e) {
    throw ConfigError("degree_csv", degree_csv + ": " + e.what());
  }
  if (sample.empty()) throw ConfigError("degree_csv", "no rows");
  std::vector<int> totals;
  totals.reserve(sample.size());
  for (const NodeDegrees& d : sample) totals.push_back(d.total);
  return DegreeLaw::empirical(totals);
}

TransmissionModel RunConfig::transmission() const {
  return transmission_at(trans == "coupon" ? static_cast<double>(K) : p);
}

TransmissionModel RunConfig::transmission_at(double value) const {
  if (trans == "bernoulli") return TransmissionModel::bernoulli(value);
  if (trans == "nodeperc") return TransmissionModel::node_percolation(value);
  return TransmissionModel::coupon_collector(static_cast<unsigned>(std::lround(value)));
}

JointDegreeLaw RunConfig::joint_law() const { return {degree_law(), transmission()}; }

CampaignConfig RunConfig::campaign() const {
  CampaignConfig c;
  c.z = z;
  c.cost_per_pioneer = cost_per_pioneer;
  c.value_per_influenced = value_per_influenced;
  if (population > 0) c.population = static_cast<double>(population);
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const std::string& key : keys()) j[key] = get(key);
  return j;
}

}  // namespace viralcm::cli

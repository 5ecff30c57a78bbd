#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "viralcm/analytic.hpp"
#include "viralcm/diffusion.hpp"
#include "viralcm/estimators.hpp"

namespace viralcm::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Sweep grid start:stop:step, both ends inclusive.
struct Grid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.02;

  std::vector<double> points() const;
  std::string to_string() const;
  static Grid parse(const std::string& text);
};

/// Every knob of a run. Serialized as flat key=value lines; doubles are
/// written in their shortest round-trip form, so the text is lossless.
struct RunConfig {
  std::string degree = "poisson";  // poisson | powerlaw | empirical
  double lambda = 2.0;             // mean degree [edges per node]
  double beta = 2.45;              // power-law exponent [dimensionless]
  std::string degree_csv;          // empirical degrees: CSV of pioneers
  std::string trans = "bernoulli";  // bernoulli | nodeperc | coupon
  double p = 0.8;                   // transmission probability [0..1]
  unsigned K = 2;                   // coupon-collector picks [count]
  std::size_t n = 1000;             // nodes [count]
  std::uint64_t seed = 1;
  Grid grid;                        // swept parameter: p, or K for coupon
  double gamma = 0.5;               // good pioneer: fraction of the largest reach
  double floor = 0.01;              // good pioneer: fraction of n
  double z = 2.33;                  // one-sided test multiplier [std errors]
  double cost_per_pioneer = 1.0;    // [cost units]
  double value_per_influenced = 0.0;  // [cost units per node]
  std::size_t population = 0;       // evaluate: network size [nodes], 0 = unknown
  std::size_t pioneers = 0;         // 0: all n pioneers; m: sample m of them
  unsigned threads = 0;             // 0: hardware concurrency
  std::string input;                // evaluate: pioneer CSV
  std::string out = "out";          // output directory
  bool dump_graph = false;          // simulate: also write graph.txt

  static const std::vector<std::string>& keys();

  /// Sets one field from its text form; throws ConfigError naming the field.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// key=value lines with unit comments.
  std::string to_text() const;
  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::filesystem::path& path);

  /// Domain checks for the fields the given command uses.
  void validate(const std::string& command) const;

  DegreeLaw degree_law() const;
  TransmissionModel transmission() const;
  /// Transmission model with the swept parameter replaced by `value`.
  TransmissionModel transmission_at(double value) const;
  JointDegreeLaw joint_law() const;
  ClassificationRule rule() const { return {gamma, floor}; }
  CampaignConfig campaign() const;

  nlohmann::json to_json() const;

  bool operator==(const RunConfig&) const = default;
};

bool operator==(const Grid& a, const Grid& b);

}  // namespace viralcm::cli

#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "viralcm/analytic.hpp"
#include "viralcm/diffusion.hpp"
#include "viralcm/estimators.hpp"

namespace viralcm {

/// Version stamped into every JSON document the library writes.
inline constexpr int kSchemaVersion = 1;

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads "degree,transmitter_degree" rows (header required, blank lines
/// skipped). Rows with transmitter_degree > degree, negative or non-integer
/// fields are rejected with their 1-based line number.
DegreeSample read_degree_csv(std::istream& in);
void write_degree_csv(std::ostream& out, std::span<const NodeDegrees> sample);

nlohmann::json to_json(const RootResult& r);
nlohmann::json to_json(const AnalyticResult& r);
nlohmann::json to_json(const BranchingCheck& b);
nlohmann::json to_json(const Moments& m);
nlohmann::json to_json(const TestResult& t);
nlohmann::json to_json(const FractionEstimate& f);
nlohmann::json to_json(const CostBenefit& c);
nlohmann::json to_json(const EstimationReport& r);
/// {n, seed, alpha_hat_sim, alpha_bar_hat_sim, good_pioneers, classification,
///  histogram: [[size_fraction, count], ...]}
nlohmann::json to_json(const DiffusionOutcome& o);

}  // namespace viralcm

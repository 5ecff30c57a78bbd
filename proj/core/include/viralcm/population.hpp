#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "viralcm/rng.hpp"
#include "viralcm/special_functions.hpp"

namespace viralcm {

/// Tail mass dropped when an infinite support is truncated.
inline constexpr double kDefaultTailMass = 1e-12;

/// Total degree D and transmitter degree D^(t) of one node; D^(r) = D - D^(t).
struct NodeDegrees {
  int total = 0;
  int transmitter = 0;

  int receiver() const { return total - transmitter; }
  auto operator<=>(const NodeDegrees&) const = default;
};

using DegreeSample = std::vector<NodeDegrees>;

/// Law of the total degree D.
class DegreeLaw {
 public:
  struct Poisson {
    double lambda;
  };
  /// P{D = k} = k^-beta / zeta(beta), k >= 1.
  struct PowerLaw {
    double beta;
  };
  struct Empirical {
    DiscretePmf pmf;
  };
  using Kind = std::variant<Poisson, PowerLaw, Empirical>;

  static DegreeLaw poisson(double lambda);
  static DegreeLaw power_law(double beta);
  static DegreeLaw empirical(DiscretePmf pmf);
  static DegreeLaw empirical(std::span<const int> degrees);

  const Kind& kind() const { return kind_; }
  bool is_power_law() const { return std::holds_alternative<PowerLaw>(kind_); }
  std::string name() const;

  double mean() const;
  /// E[D^2]; +infinity when divergent (power law with beta <= 3).
  double second_moment() const;

  /// G_D(x) = E[x^D].
  double pgf(double x) const;
  /// E[D x^D] = x G'_D(x); finite on [0, 1] for every supported law.
  double degree_weighted_pgf(double x) const;
  /// G'_D(x).
  double pgf_derivative(double x) const;

  /// Pmf with at most `tail_mass` of the law dropped, renormalized for
  /// Poisson; power laws record the dropped mass in DiscretePmf::tail_mass().
  /// Throws DomainError when the table would exceed `max_entries`.
  DiscretePmf truncated_pmf(double tail_mass = kDefaultTailMass,
                            std::size_t max_entries = std::size_t{1} << 24) const;

 private:
  struct PowerLawCache;

  explicit DegreeLaw(Kind kind);

  Kind kind_;
  std::shared_ptr<const PowerLawCache> power_law_;
};

/// How a node of total degree d splits its half-edges into transmitters.
class TransmissionModel {
 public:
  /// Each half-edge transmits independently with probability p.
  struct Bernoulli {
    double p;
  };
  /// With probability p all half-edges transmit, otherwise none.
  struct NodePercolation {
    double p;
  };
  /// K friend picks uniformly with replacement; transmitters = distinct picks.
  struct CouponCollector {
    unsigned K;
  };
  using Kind = std::variant<Bernoulli, NodePercolation, CouponCollector>;

  static TransmissionModel bernoulli(double p);
  static TransmissionModel node_percolation(double p);
  static TransmissionModel coupon_collector(unsigned K);

  const Kind& kind() const { return kind_; }
  std::string name() const;

  /// Law of D^(t) given D = d, supported on {0..d}.
  DiscretePmf conditional_pmf(unsigned d) const;

  /// Draws D^(t) given D = d by simulating the per-node mechanism directly.
  int sample(int d, Rng& rng) const;

 private:
  explicit TransmissionModel(Kind kind) : kind_(kind) {}
  Kind kind_;
};

DiscretePmf conditional_transmitter_pmf(const TransmissionModel& model, unsigned d);

/// Occupancy law of the number of distinct values among K uniform draws
/// from d values: P{k} = d!/(d-k)! {K over k} / d^K. Exact.
std::vector<Rational> occupancy_pmf_exact(unsigned d, unsigned K);

/// Moments of (D, D^(t)); divergent entries are +infinity.
struct Moments {
  double total_mean = 0.0;          // E[D]
  double total_second = 0.0;        // E[D^2]
  double transmitter_mean = 0.0;    // E[D^(t)]
  double mixed = 0.0;               // E[D^(t) D]
  double receiver_mean = 0.0;       // E[D^(r)]

  bool second_moment_divergent() const;
  bool mixed_divergent() const;
};

/// One atom (d, t) of the joint law with its probability.
struct JointAtom {
  int total;
  int transmitter;
  double probability;
};

/// Closed-form sums for the power-law degree with coupon-collector
/// transmissions, via falling-factorial expansion into polylogarithms:
///   sum_d P{D=d, D^(t)=k} d^a x^d
///     = {K over k}/zeta(beta) sum_j s(k,j) Li_{beta+K-j-a}(x).
class PowerLawOccupancy {
 public:
  /// Largest K accepted; above it the signed expansion loses accuracy.
  static constexpr unsigned kMaxTrials = 8;

  PowerLawOccupancy(double beta, unsigned K);

  unsigned trials() const { return K_; }
  /// sum_d P{D=d, D^(t)=k} d^a x^d for a in {0, 1}.
  double weighted_mass(unsigned k, unsigned a, double x) const;

 private:
  double beta_;
  unsigned K_;
  double zeta_beta_;
  std::vector<std::vector<double>> coeffs_;  // [k][j] = {K,k} s(k,j)
  std::vector<Polylog> polylogs_;             // order beta + m - 1, m = 0..K+1
};

class JointDegreeLaw {
 public:
  JointDegreeLaw(DegreeLaw degree, TransmissionModel transmission);

  const DegreeLaw& degree() const { return degree_; }
  const TransmissionModel& transmission() const { return transmission_; }
  std::string name() const;

  /// Atoms of the joint law after truncating D. Throws DomainError for
  /// power-law degrees, whose support cannot be enumerated to 1e-12.
  std::vector<JointAtom> atoms(double tail_mass = kDefaultTailMass) const;

  Moments moments() const;

  /// n i.i.d. pairs (D_i, D_i^(t)); deterministic in `seed`.
  DegreeSample sample(std::size_t n, std::uint64_t seed) const;

 private:
  DegreeLaw degree_;
  TransmissionModel transmission_;
};

inline Moments moments(const JointDegreeLaw& law) { return law.moments(); }

inline DegreeSample sample_joint(const JointDegreeLaw& law, std::size_t n,
                                 std::uint64_t seed) {
  return law.sample(n, seed);
}

/// Inverse-CDF sampler for a degree law. Power-law tails beyond the table
/// are drawn exactly by rejection against a continuous Pareto envelope.
class DegreeSampler {
 public:
  explicit DegreeSampler(const DegreeLaw& law);
  int operator()(Rng& rng) const;

 private:
  int sample_tail(Rng& rng) const;

  DegreeLaw law_;
  std::vector<double> cdf_;
  std::size_t offset_ = 0;
};

}  // namespace viralcm

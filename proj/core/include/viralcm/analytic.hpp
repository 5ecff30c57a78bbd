#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "viralcm/population.hpp"

namespace viralcm {

/// Generating functions of (D, D^(t)) from one joint law or one sample.
///
/// Every function and every `*_sum` field is an unnormalized sum; divide by
/// `norm` to get the expectation. Laws use norm = 1. Samples use norm = N
/// with integer sums, which makes H(1) = Hbar(1) = H0(1) = 0 hold exactly.
struct GenFnBundle {
  using Fn = std::function<double(double)>;

  double norm = 1.0;
  double total_sum = 0.0;        // E[D]
  double receiver_sum = 0.0;     // E[D^(r)]
  double transmitter_sum = 0.0;  // E[D^(t)]

  /// Normalized moments, used for the viral and giant-component conditions.
  Moments moments;

  Fn total_pgf;                             // E[x^D]
  Fn transmitter_pgf;                       // E[x^D(t)]
  Fn total_weighted_total_pgf;              // E[D x^D] = x G'_D(x)
  Fn transmitter_weighted_total_pgf;        // E[D(t) x^D]
  Fn transmitter_weighted_transmitter_pgf;  // E[D(t) x^D(t)]
  Fn receiver_weighted_transmitter_pgf;     // E[D(r) x^D(t)]

  double G_D(double x) const { return total_pgf(x) / norm; }
  double G_Dt(double x) const { return transmitter_pgf(x) / norm; }
};

/// Truncated summation over joint atoms for enumerable laws; polylog closed
/// forms for power-law degrees.
GenFnBundle build_genfns(const JointDegreeLaw& law);

/// Empirical bundle (plug-in estimators). Throws DomainError on an empty sample.
GenFnBundle build_genfns(std::span<const NodeDegrees> sample);

/// H(x) = E[D] x^2 - E[D(r)] x - E[D(t) x^D]; its root gives the influenced fraction.
double eval_H(const GenFnBundle& bundle, double x);
/// Hbar(x) = E[D] x^2 - E[D(t) x^D(t)] - E[D(r) x^D(t)] x; root gives the good-pioneer fraction.
double eval_Hbar(const GenFnBundle& bundle, double x);
/// H0(x) = E[D] x^2 - x G'_D(x); root gives the giant component.
double eval_H0(const GenFnBundle& bundle, double x);

enum class RootKind { kH, kHbar, kH0 };

enum class RootStatus {
  kFound,           // certified sign change in (0, 1), residual <= 1e-12
  kAbsent,          // no sign change on (0, 1)
  kCritical,        // condition margin below 1e-9; no root reported
  kDegenerateZero,  // function positive on all of (0, 1): the zero sits at x = 0
  kNonBracketing,   // condition holds but the numerics failed to certify a root
};

std::string_view to_string(RootStatus status);

struct RootResult {
  RootStatus status = RootStatus::kAbsent;
  std::optional<double> root;
  double residual = 0.0;

  /// Point at which to evaluate the pgfs: the root, 0 when degenerate,
  /// nothing when absent.
  std::optional<double> evaluation_point() const;
};

inline constexpr double kRootResidualTolerance = 1e-12;
inline constexpr double kCriticalMargin = 1e-9;

/// Zero of f in (0, 1) nearest to 1. The bracket scan starts at 1 - 1e-6
/// and moves down in steps of 1e-3, then halves toward 0; the bracket is
/// refined by bisection interleaved with secant steps that stay inside it.
/// If f is negative on the whole scan, points between the scan start and 1
/// are probed before the zero is declared absent.
RootResult find_root(const std::function<double(double)>& f);
RootResult find_root(const GenFnBundle& bundle, RootKind kind);

/// E[D(t) D] - E[D(t)] - E[D]; +infinity when E[D(t) D] diverges.
double viral_margin(const Moments& m);
/// E[D^2] - 2 E[D]; +infinity when E[D^2] diverges.
double giant_margin(const Moments& m);

bool viral_condition(const Moments& m);
bool giant_condition(const Moments& m);

struct AnalyticResult {
  bool viral_condition = false;
  bool giant_condition = false;
  bool viral_critical = false;
  bool giant_critical = false;
  RootResult xi;      // root of H
  RootResult xi_bar;  // root of Hbar
  RootResult xi0;     // root of H0
  double alpha = 0.0;
  double alpha_bar = 0.0;
  double alpha0 = 0.0;
};

/// alpha = 1 - G_D(xi), alpha_bar = 1 - G_Dt(xi_bar), alpha0 = 1 - G_D(xi0);
/// zero for absent roots.
AnalyticResult fractions(const GenFnBundle& bundle, const RootResult& xi,
                         const RootResult& xi_bar, const RootResult& xi0);

/// Conditions, roots and fractions in one pass.
AnalyticResult analyze(const GenFnBundle& bundle);
AnalyticResult analyze(const JointDegreeLaw& law);

/// Smallest Bernoulli transmission probability that makes the campaign viral:
/// E[D] / (E[D^2] - E[D]). Zero when E[D^2] diverges, +infinity when
/// E[D^2] <= E[D] (never viral).
double bernoulli_threshold(const DegreeLaw& degree);

/// Joint law of (receiver, transmitter) degrees of a node reached along a
/// uniformly chosen edge, minus the edge used to reach it.
class SizeBiasedLaw {
 public:
  struct Atom {
    int receiver;
    int transmitter;
    double probability;
  };

  explicit SizeBiasedLaw(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const { return atoms_; }
  double total_mass() const;
  double transmitter_mean() const;
  /// Offspring pgf E[x^D~(t)].
  double transmitter_pgf(double x) const;
  double transmitter_pgf_derivative(double x) const;

 private:
  std::vector<Atom> atoms_;
};

/// Throws DomainError when E[D] = 0 or the law is not enumerable.
SizeBiasedLaw size_biased_law(std::span<const JointAtom> joint);
SizeBiasedLaw size_biased_law(const JointDegreeLaw& law);

struct BranchingCheck {
  bool supercritical = false;
  double offspring_mean = 0.0;       // E[D~(t)]
  double extinction_probability = 1.0;
  double alpha_bar_bp = 0.0;         // 1 - E[p_ext^D(t)]
  bool from_size_biased_atoms = true;  // false: offspring pgf from the bundle
};

/// Galton-Watson extinction probability by fixed-point iteration on the
/// offspring pgf, polished by Newton steps. Power-law laws use the bundle's
/// mixed pgfs for the offspring pgf since their atoms cannot be enumerated.
BranchingCheck branching_crosscheck(const JointDegreeLaw& law);

}  // namespace viralcm

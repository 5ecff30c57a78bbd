#include "viralcm/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace viralcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Polynomial coefficients of every bundle function, indexed by the exponent.
struct PolynomialTerms {
  std::vector<double> total;                     // P{D = d}
  std::vector<double> total_weighted;            // d P{D = d}
  std::vector<double> transmitter_weighted_total;  // sum_t t P{d, t}
  std::vector<double> transmitter;               // P{D(t) = t}
  std::vector<double> transmitter_weighted;      // t P{D(t) = t}
  std::vector<double> receiver_weighted;         // sum_d (d - t) P{d, t}

  void add(int d, int t, double w) {
    grow(total, d);
    grow(total_weighted, d);
    grow(transmitter_weighted_total, d);
    grow(transmitter, t);
    grow(transmitter_weighted, t);
    grow(receiver_weighted, t);
    total[static_cast<std::size_t>(d)] += w;
    total_weighted[static_cast<std::size_t>(d)] += d * w;
    transmitter_weighted_total[static_cast<std::size_t>(d)] += t * w;
    transmitter[static_cast<std::size_t>(t)] += w;
    transmitter_weighted[static_cast<std::size_t>(t)] += t * w;
    receiver_weighted[static_cast<std::size_t>(t)] += (d - t) * w;
  }

  static void grow(std::vector<double>& v, int index) {
    if (static_cast<std::size_t>(index) >= v.size()) v.resize(static_cast<std::size_t>(index) + 1, 0.0);
  }
};

GenFnBundle bundle_from_terms(std::shared_ptr<const PolynomialTerms> terms, double norm) {
  GenFnBundle b;
  b.norm = norm;
  b.total_pgf = [terms](double x) { return horner(terms->total, x); };
  b.transmitter_pgf = [terms](double x) { return horner(terms->transmitter, x); };
  b.total_weighted_total_pgf = [terms](double x) { return horner(terms->total_weighted, x); };
  b.transmitter_weighted_total_pgf = [terms](double x) {
    return horner(terms->transmitter_weighted_total, x);
  };
  b.transmitter_weighted_transmitter_pgf = [terms](double x) {
    return horner(terms->transmitter_weighted, x);
  };
  b.receiver_weighted_transmitter_pgf = [terms](double x) {
    return horner(terms->receiver_weighted, x);
  };
  // Sums in index order: for integer counts these are exact.
  for (double v : terms->total_weighted) b.total_sum += v;
  for (double v : terms->transmitter_weighted) b.transmitter_sum += v;
  for (double v : terms->receiver_weighted) b.receiver_sum += v;
  return b;
}

GenFnBundle power_law_bundle(const JointDegreeLaw& law, double beta) {
  const double z = zeta(beta);
  auto li_beta = std::make_shared<const Polylog>(beta);
  auto li_beta1 = std::make_shared<const Polylog>(beta - 1.0);
  const auto G = [li_beta, z](double x) { return (*li_beta)(x) / z; };
  const auto xGp = [li_beta1, z](double x) { return (*li_beta1)(x) / z; };
  const auto Gp = [li_beta1, z](double y) { return y == 0.0 ? 1.0 / z : (*li_beta1)(y) / (y * z); };

  GenFnBundle b;
  b.moments = law.moments();
  b.total_sum = b.moments.total_mean;
  b.transmitter_sum = b.moments.transmitter_mean;
  b.receiver_sum = b.moments.receiver_mean;
  b.total_pgf = G;
  b.total_weighted_total_pgf = xGp;

  std::visit(
      [&](const auto& model) {
        using M = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<M, TransmissionModel::Bernoulli>) {
          const double p = model.p;
          // Given D, D(t) ~ Binomial(D, p): evaluate G and G' at y = 1 - p + p x.
          b.transmitter_pgf = [G, p](double x) { return G(1.0 - p + p * x); };
          b.transmitter_weighted_total_pgf = [xGp, p](double x) { return p * xGp(x); };
          b.transmitter_weighted_transmitter_pgf = [Gp, p](double x) {
            return p * x * Gp(1.0 - p + p * x);
          };
          b.receiver_weighted_transmitter_pgf = [Gp, p](double x) {
            return (1.0 - p) * Gp(1.0 - p + p * x);
          };
        } else if constexpr (std::is_same_v<M, TransmissionModel::NodePercolation>) {
          const double p = model.p;
          const double mean = b.total_sum;
          b.transmitter_pgf = [G, p](double x) { return 1.0 - p + p * G(x); };
          b.transmitter_weighted_total_pgf = [xGp, p](double x) { return p * xGp(x); };
          b.transmitter_weighted_transmitter_pgf = [xGp, p](double x) { return p * xGp(x); };
          b.receiver_weighted_transmitter_pgf = [p, mean](double) { return (1.0 - p) * mean; };
        } else {
          auto occ = std::make_shared<const PowerLawOccupancy>(beta, model.K);
          const unsigned K = model.K;
          // Coefficients in x^k of the transmitter-indexed functions.
          auto mass = std::make_shared<std::vector<double>>(K + 1);
          auto weighted = std::make_shared<std::vector<double>>(K + 1);
          auto receiver = std::make_shared<std::vector<double>>(K + 1);
          for (unsigned k = 0; k <= K; ++k) {
            (*mass)[k] = occ->weighted_mass(k, 0, 1.0);
            (*weighted)[k] = k * (*mass)[k];
            (*receiver)[k] = occ->weighted_mass(k, 1, 1.0) - k * (*mass)[k];
          }
          b.transmitter_pgf = [mass](double x) { return horner(*mass, x); };
          b.transmitter_weighted_transmitter_pgf = [weighted](double x) { return horner(*weighted, x); };
          b.receiver_weighted_transmitter_pgf = [receiver](double x) { return horner(*receiver, x); };
          b.transmitter_weighted_total_pgf = [occ, K](double x) {
            double sum = 0.0;
            for (unsigned k = 1; k <= K; ++k) sum += k * occ->weighted_mass(k, 0, x);
            return sum;
          };
        }
      },
      law.transmission().kind());
  return b;
}

void require_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("argument outside [0, 1]");
}

}  // namespace

GenFnBundle build_genfns(const JointDegreeLaw& law) {
  if (const auto* pl = std::get_if<DegreeLaw::PowerLaw>(&law.degree().kind())) {
    return power_law_bundle(law, pl->beta);
  }
  auto terms = std::make_shared<PolynomialTerms>();
  for (const JointAtom& a : law.atoms()) terms->add(a.total, a.transmitter, a.probability);
  GenFnBundle b = bundle_from_terms(terms, 1.0);
  b.moments = law.moments();
  return b;
}

GenFnBundle build_genfns(std::span<const NodeDegrees> sample) {
  if (sample.empty()) throw DomainError("build_genfns: empty sample");
  auto terms = std::make_shared<PolynomialTerms>();
  Moments m;
  for (const NodeDegrees& node : sample) {
    if (node.total < 0 || node.transmitter < 0 || node.transmitter > node.total) {
      throw DomainError("build_genfns: invalid degree pair");
    }
    terms->add(node.total, node.transmitter, 1.0);
    const double d = node.total, t = node.transmitter;
    m.total_second += d * d;
    m.mixed += d * t;
  }
  const auto n = static_cast<double>(sample.size());
  GenFnBundle b = bundle_from_terms(terms, n);
  m.total_mean = b.total_sum / n;
  m.transmitter_mean = b.transmitter_sum / n;
  m.receiver_mean = b.receiver_sum / n;
  m.total_second /= n;
  m.mixed /= n;
  b.moments = m;
  return b;
}

double eval_H(const GenFnBundle& b, double x) {
  require_unit(x);
  return (b.total_sum * x * x - b.receiver_sum * x - b.transmitter_weighted_total_pgf(x)) / b.norm;
}

double eval_Hbar(const GenFnBundle& b, double x) {
  require_unit(x);
  return (b.total_sum * x * x - b.transmitter_weighted_transmitter_pgf(x) -
          b.receiver_weighted_transmitter_pgf(x) * x) /
         b.norm;
}

double eval_H0(const GenFnBundle& b, double x) {
  require_unit(x);
  return (b.total_sum * x * x - b.total_weighted_total_pgf(x)) / b.norm;
}

std::string_view to_string(RootStatus status) {
  switch (status) {
    case RootStatus::kFound: return "found";
    case RootStatus::kAbsent: return "absent";
    case RootStatus::kCritical: return "critical";
    case RootStatus::kDegenerateZero: return "degenerate_zero";
    case RootStatus::kNonBracketing: return "non_bracketing";
  }
  return "unknown";
}

std::optional<double> RootResult::evaluation_point() const {
  if (status == RootStatus::kFound) return root;
  if (status == RootStatus::kDegenerateZero) return 0.0;
  return std::nullopt;
}

RootResult find_root(const std::function<double(double)>& f) {
  constexpr double kStart = 1.0 - 1e-6;
  constexpr double kStep = 1e-3;

  double hi = kStart;
  double f_hi = f(hi);
  const double f_start = f_hi;
  const bool positive_near_one = f_hi > 0.0;
  if (f_hi == 0.0) return {RootStatus::kFound, hi, 0.0};

  auto changes_sign = [&](double fx) { return fx == 0.0 || (fx < 0.0) != (f_hi < 0.0); };

  std::optional<double> lo;
  double f_lo = 0.0;
  for (int i = 1;; ++i) {
    const double x = kStart - i * kStep;
    if (x <= kStep / 2) break;
    const double fx = f(x);
    if (changes_sign(fx)) {
      lo = x;
      f_lo = fx;
      break;
    }
    hi = x;
    f_hi = fx;
  }
  if (!lo) {
    for (double x = hi / 2; x > 1e-300; x /= 2) {
      const double fx = f(x);
      if (changes_sign(fx)) {
        lo = x;
        f_lo = fx;
        break;
      }
      hi = x;
      f_hi = fx;
    }
  }
  if (!lo && !positive_near_one) {
    // Negative on the whole scan: a zero may still sit above the scan start
    // when the degree tail is heavy. Values this close to 1 are tiny, so a
    // positive reading must clear the rounding floor to count.
    constexpr double kNoiseFloor = 1e-14;
    double below = kStart, f_below = f_start;
    for (double eps = 5e-7; eps >= 1e-10; eps /= 2) {
      const double x = 1.0 - eps;
      const double fx = f(x);
      if (fx > kNoiseFloor) {
        lo = below;
        f_lo = f_below;
        hi = x;
        f_hi = fx;
        break;
      }
      if (fx < 0.0) {
        below = x;
        f_below = fx;
      }
    }
  }
  if (!lo) {
    if (positive_near_one) return {RootStatus::kDegenerateZero, 0.0, std::abs(f(0.0))};
    return {RootStatus::kAbsent, std::nullopt, 0.0};
  }
  if (f_lo == 0.0) return {RootStatus::kFound, *lo, 0.0};

  double a = *lo, fa = f_lo, b = hi, fb = f_hi;
  bool bisect_next = false;
  for (int iter = 0; iter < 400; ++iter) {
    const double width = b - a;
    if (width <= 4 * std::numeric_limits<double>::epsilon() * b) break;
    double c = 0.5 * (a + b);
    if (!bisect_next) {
      const double secant = b - fb * (b - a) / (fb - fa);
      if (secant > a && secant < b) c = secant;
    }
    const double fc = f(c);
    if (fc == 0.0) {
      a = b = c;
      fa = fb = 0.0;
      break;
    }
    if ((fc < 0.0) == (fa < 0.0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
      fb = fc;
    }
    // Fall back to bisection whenever a step fails to halve the bracket.
    bisect_next = !bisect_next && (b - a) > 0.5 * width;
  }
  const bool take_a = std::abs(fa) <= std::abs(fb);
  const double root = take_a ? a : b;
  const double residual = std::abs(take_a ? fa : fb);
  if (residual > kRootResidualTolerance) return {RootStatus::kNonBracketing, root, residual};
  return {RootStatus::kFound, root, residual};
}

RootResult find_root(const GenFnBundle& bundle, RootKind kind) {
  switch (kind) {
    case RootKind::kH: return find_root([&](double x) { return eval_H(bundle, x); });
    case RootKind::kHbar: return find_root([&](double x) { return eval_Hbar(bundle, x); });
    case RootKind::kH0: return find_root([&](double x) { return eval_H0(bundle, x); });
  }
  return {};
}

double viral_margin(const Moments& m) {
  if (m.mixed_divergent()) return kInf;
  return m.mixed - m.transmitter_mean - m.total_mean;
}

double giant_margin(const Moments& m) {
  if (m.second_moment_divergent()) return kInf;
  return m.total_second - 2.0 * m.total_mean;
}

bool viral_condition(const Moments& m) {
  const double margin = viral_margin(m);
  return margin > 0.0 && !(margin < kCriticalMargin);
}

bool giant_condition(const Moments& m) {
  const double margin = giant_margin(m);
  return margin > 0.0 && !(margin < kCriticalMargin);
}

AnalyticResult fractions(const GenFnBundle& bundle, const RootResult& xi,
                         const RootResult& xi_bar, const RootResult& xi0) {
  AnalyticResult r;
  r.xi = xi;
  r.xi_bar = xi_bar;
  r.xi0 = xi0;
  if (auto x = xi.evaluation_point()) r.alpha = 1.0 - bundle.G_D(*x);
  if (auto x = xi_bar.evaluation_point()) r.alpha_bar = 1.0 - bundle.G_Dt(*x);
  if (auto x = xi0.evaluation_point()) r.alpha0 = 1.0 - bundle.G_D(*x);
  return r;
}

AnalyticResult analyze(const GenFnBundle& bundle) {
  const Moments& m = bundle.moments;
  const double vm = viral_margin(m);
  const double gm = giant_margin(m);
  const bool viral_critical = std::abs(vm) < kCriticalMargin;
  const bool giant_critical = std::abs(gm) < kCriticalMargin;

  auto solve = [&](bool condition, bool critical, RootKind kind) -> RootResult {
    if (critical) return {RootStatus::kCritical, std::nullopt, 0.0};
    if (!condition) return {RootStatus::kAbsent, std::nullopt, 0.0};
    RootResult r = find_root(bundle, kind);
    // The condition guarantees an interior zero; failing to see one is a numerics failure.
    if (r.status == RootStatus::kAbsent) r.status = RootStatus::kNonBracketing;
    return r;
  };

  const bool viral = viral_condition(m);
  const bool giant = giant_condition(m);
  AnalyticResult r = fractions(bundle, solve(viral, viral_critical, RootKind::kH),
                               solve(viral, viral_critical, RootKind::kHbar),
                               solve(giant, giant_critical, RootKind::kH0));
  r.viral_condition = viral;
  r.giant_condition = giant;
  r.viral_critical = viral_critical;
  r.giant_critical = giant_critical;
  return r;
}

AnalyticResult analyze(const JointDegreeLaw& law) { return analyze(build_genfns(law)); }

double bernoulli_threshold(const DegreeLaw& degree) {
  const double second = degree.second_moment();
  if (std::isinf(second)) return 0.0;
  const double mean = degree.mean();
  if (second - mean <= 0.0) return kInf;
  return mean / (second - mean);
}

// ---------------------------------------------------------------------------
// Branching-process approximation

SizeBiasedLaw::SizeBiasedLaw(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (std::abs(total_mass() - 1.0) > 1e-9) {
    throw DomainError("size-biased law: mass " + std::to_string(total_mass()));
  }
}

double SizeBiasedLaw::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.probability;
  return s;
}

double SizeBiasedLaw::transmitter_mean() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.transmitter * a.probability;
  return s;
}

double SizeBiasedLaw::transmitter_pgf(double x) const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.probability * std::pow(x, a.transmitter);
  return s;
}

double SizeBiasedLaw::transmitter_pgf_derivative(double x) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.transmitter > 0) s += a.probability * a.transmitter * std::pow(x, a.transmitter - 1);
  }
  return s;
}

SizeBiasedLaw size_biased_law(std::span<const JointAtom> joint) {
  double mean = 0.0;
  for (const JointAtom& a : joint) mean += a.total * a.probability;
  if (!(mean > 0.0)) throw DomainError("size-biased law: E[D] must be positive");

  // P{v, w} = ((v+1) p_{v+1,w} + (w+1) p_{v,w+1}) / E[D]: each atom (r, t)
  // feeds (r-1, t) with weight r and (r, t-1) with weight t.
  std::map<std::pair<int, int>, double> mass;
  for (const JointAtom& a : joint) {
    const int r = a.total - a.transmitter;
    const int t = a.transmitter;
    if (r > 0) mass[{r - 1, t}] += r * a.probability / mean;
    if (t > 0) mass[{r, t - 1}] += t * a.probability / mean;
  }
  std::vector<SizeBiasedLaw::Atom> atoms;
  atoms.reserve(mass.size());
  for (const auto& [key, p] : mass) atoms.push_back({key.first, key.second, p});
  return SizeBiasedLaw(std::move(atoms));
}

SizeBiasedLaw size_biased_law(const JointDegreeLaw& law) {
  const auto atoms = law.atoms();
  return size_biased_law(atoms);
}

namespace {

// Smallest fixed point of the offspring pgf on [0, 1].
double extinction_probability(const std::function<double(double)>& phi,
                              const std::function<double(double)>& phi_prime) {
  double q = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    const double next = phi(q);
    const bool done = std::abs(next - q) < 1e-15;
    q = next;
    if (done) break;
  }
  for (int i = 0; i < 8; ++i) {
    const double g = phi(q) - q;
    const double slope = phi_prime(q) - 1.0;
    if (g == 0.0 || slope >= 0.0) break;
    const double next = q - g / slope;
    if (!(next >= 0.0 && next < 1.0) || std::abs(phi(next) - next) >= std::abs(g)) break;
    q = next;
  }
  return q;
}

}  // namespace

BranchingCheck branching_crosscheck(const JointDegreeLaw& law) {
  BranchingCheck out;
  const GenFnBundle bundle = build_genfns(law);
  std::function<double(double)> phi, phi_prime;
  std::shared_ptr<const SizeBiasedLaw> biased;

  if (law.degree().is_power_law()) {
    out.from_size_biased_atoms = false;
    const Moments& m = bundle.moments;
    out.offspring_mean =
        m.mixed_divergent() ? kInf : (m.mixed - m.transmitter_mean) / m.total_mean;
    const double mean = bundle.total_sum;
    phi = [&bundle, mean](double x) {
      x = std::max(x, 1e-300);
      return (bundle.receiver_weighted_transmitter_pgf(x) +
              bundle.transmitter_weighted_transmitter_pgf(x) / x) /
             mean;
    };
    phi_prime = [phi](double x) {
      const double h = 1e-7;
      const double lo = std::max(0.0, x - h), hi = std::min(1.0, x + h);
      return (phi(hi) - phi(lo)) / (hi - lo);
    };
  } else {
    biased = std::make_shared<const SizeBiasedLaw>(size_biased_law(law));
    out.offspring_mean = biased->transmitter_mean();
    phi = [biased](double x) { return biased->transmitter_pgf(x); };
    phi_prime = [biased](double x) { return biased->transmitter_pgf_derivative(x); };
  }

  out.supercritical = out.offspring_mean > 1.0 && !(out.offspring_mean - 1.0 < kCriticalMargin);
  if (!out.supercritical) return out;
  out.extinction_probability = extinction_probability(phi, phi_prime);
  out.alpha_bar_bp = 1.0 - bundle.G_Dt(out.extinction_probability);
  return out;
}

}  // namespace viralcm

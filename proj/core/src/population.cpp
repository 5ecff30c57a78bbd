#include "viralcm/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace viralcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(who) + ": probability outside [0, 1]");
  }
}

DiscretePmf binomial_pmf(unsigned d, double p) {
  if (p == 0.0 || d == 0) return DiscretePmf::point_mass(0);
  if (p == 1.0) return DiscretePmf::point_mass(d);
  // Recurse outward from the mode so nothing underflows before it matters.
  std::vector<double> w(d + 1, 0.0);
  const double odds = p / (1.0 - p);
  const auto mode = std::min<unsigned>(d, static_cast<unsigned>(std::floor((d + 1) * p)));
  w[mode] = 1.0;
  for (unsigned k = mode; k < d; ++k) {
    w[k + 1] = w[k] * (static_cast<double>(d - k) / (k + 1)) * odds;
  }
  for (unsigned k = mode; k > 0; --k) {
    w[k - 1] = w[k] * (static_cast<double>(k) / (d - k + 1)) / odds;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return DiscretePmf(std::move(w));
}

// E[D^(t) | D = d] under coupon collection: d (1 - (1 - 1/d)^K).
double expected_distinct(unsigned d, unsigned K) {
  if (d == 0 || K == 0) return 0.0;
  if (d == 1) return 1.0;
  const double dd = d;
  return -dd * std::expm1(K * std::log1p(-1.0 / dd));
}

}  // namespace

// ---------------------------------------------------------------------------
// DegreeLaw

struct DegreeLaw::PowerLawCache {
  explicit PowerLawCache(double beta)
      : zeta_beta(zeta(beta)), li_beta(beta), li_beta_minus_one(beta - 1.0) {}

  double zeta_beta;
  Polylog li_beta;
  Polylog li_beta_minus_one;
};

DegreeLaw::DegreeLaw(Kind kind) : kind_(std::move(kind)) {
  if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
    power_law_ = std::make_shared<const PowerLawCache>(pl->beta);
  }
}

DegreeLaw DegreeLaw::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("poisson: lambda must be positive");
  }
  return DegreeLaw(Poisson{lambda});
}

DegreeLaw DegreeLaw::power_law(double beta) {
  if (!(beta > 2.0) || !std::isfinite(beta)) {
    throw DomainError("power law: beta must exceed 2 (finite mean)");
  }
  return DegreeLaw(PowerLaw{beta});
}

DegreeLaw DegreeLaw::empirical(DiscretePmf pmf) { return DegreeLaw(Empirical{std::move(pmf)}); }

DegreeLaw DegreeLaw::empirical(std::span<const int> degrees) {
  return empirical(DiscretePmf::from_values(degrees));
}

std::string DegreeLaw::name() const {
  return std::visit(Overloaded{
                        [](const Poisson& l) { return "poisson(lambda=" + std::to_string(l.lambda) + ")"; },
                        [](const PowerLaw& l) { return "powerlaw(beta=" + std::to_string(l.beta) + ")"; },
                        [](const Empirical&) { return std::string("empirical"); },
                    },
                    kind_);
}

double DegreeLaw::mean() const {
  return std::visit(Overloaded{
                        [](const Poisson& l) { return l.lambda; },
                        [this](const PowerLaw& l) { return zeta(l.beta - 1.0) / power_law_->zeta_beta; },
                        [](const Empirical& l) { return l.pmf.mean(); },
                    },
                    kind_);
}

double DegreeLaw::second_moment() const {
  return std::visit(Overloaded{
                        [](const Poisson& l) { return l.lambda * l.lambda + l.lambda; },
                        [this](const PowerLaw& l) {
                          if (l.beta <= 3.0 + 1e-6) return kInf;
                          return zeta(l.beta - 2.0) / power_law_->zeta_beta;
                        },
                        [](const Empirical& l) { return l.pmf.second_moment(); },
                    },
                    kind_);
}

double DegreeLaw::pgf(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("pgf: argument outside [0, 1]");
  return std::visit(Overloaded{
                        [x](const Poisson& l) { return std::exp(l.lambda * (x - 1.0)); },
                        [this, x](const PowerLaw&) { return power_law_->li_beta(x) / power_law_->zeta_beta; },
                        [x](const Empirical& l) { return pgf_eval(l.pmf, x); },
                    },
                    kind_);
}

double DegreeLaw::degree_weighted_pgf(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("pgf: argument outside [0, 1]");
  return std::visit(Overloaded{
                        [x](const Poisson& l) { return l.lambda * x * std::exp(l.lambda * (x - 1.0)); },
                        [this, x](const PowerLaw&) {
                          return power_law_->li_beta_minus_one(x) / power_law_->zeta_beta;
                        },
                        [x](const Empirical& l) { return x * viralcm::pgf_derivative(l.pmf, x); },
                    },
                    kind_);
}

double DegreeLaw::pgf_derivative(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("pgf: argument outside [0, 1]");
  return std::visit(Overloaded{
                        [x](const Poisson& l) { return l.lambda * std::exp(l.lambda * (x - 1.0)); },
                        [this, x](const PowerLaw&) {
                          if (x == 0.0) return 1.0 / power_law_->zeta_beta;
                          return power_law_->li_beta_minus_one(x) / (x * power_law_->zeta_beta);
                        },
                        [x](const Empirical& l) { return viralcm::pgf_derivative(l.pmf, x); },
                    },
                    kind_);
}

DiscretePmf DegreeLaw::truncated_pmf(double tail_mass, std::size_t max_entries) const {
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw DomainError("truncated_pmf: tail mass outside (0, 1)");
  return std::visit(
      Overloaded{
          [&](const Poisson& l) {
            std::vector<double> w;
            const double log_lambda = std::log(l.lambda);
            for (std::size_t k = 0;; ++k) {
              const double kk = static_cast<double>(k);
              w.push_back(std::exp(-l.lambda + kk * log_lambda - std::lgamma(kk + 1.0)));
              if (kk + 2.0 > l.lambda) {
                // Remaining mass <= p_{k+1} / (1 - lambda / (k + 2)).
                const double next =
                    std::exp(-l.lambda + (kk + 1.0) * log_lambda - std::lgamma(kk + 2.0));
                if (next / (1.0 - l.lambda / (kk + 2.0)) <= tail_mass) break;
              }
              if (w.size() > max_entries) throw DomainError("truncated_pmf: table too large");
            }
            const double total = std::accumulate(w.begin(), w.end(), 0.0);
            for (double& x : w) x /= total;
            return DiscretePmf(std::move(w));
          },
          [&](const PowerLaw& l) {
            // sum_{k>m} k^-beta <= m^(1-beta) / (beta - 1).
            const double z = power_law_->zeta_beta;
            const double m = std::ceil(std::pow(tail_mass * (l.beta - 1.0) * z, 1.0 / (1.0 - l.beta)));
            if (!(m <= static_cast<double>(max_entries))) {
              throw DomainError("truncated_pmf: power-law table would need " + std::to_string(m) +
                                " entries");
            }
            const auto size = static_cast<std::size_t>(std::max(1.0, m));
            std::vector<double> w(size);
            double kept = 0.0;
            for (std::size_t k = size; k >= 1; --k) {
              w[k - 1] = std::pow(static_cast<double>(k), -l.beta) / z;
              kept += w[k - 1];
            }
            return DiscretePmf(std::move(w), 1, std::max(0.0, 1.0 - kept));
          },
          [](const Empirical& l) { return l.pmf; },
      },
      kind_);
}

// ---------------------------------------------------------------------------
// TransmissionModel

TransmissionModel TransmissionModel::bernoulli(double p) {
  check_probability(p, "bernoulli");
  return TransmissionModel(Bernoulli{p});
}

TransmissionModel TransmissionModel::node_percolation(double p) {
  check_probability(p, "node percolation");
  return TransmissionModel(NodePercolation{p});
}

TransmissionModel TransmissionModel::coupon_collector(unsigned K) {
  return TransmissionModel(CouponCollector{K});
}

std::string TransmissionModel::name() const {
  return std::visit(Overloaded{
                        [](const Bernoulli& m) { return "bernoulli(p=" + std::to_string(m.p) + ")"; },
                        [](const NodePercolation& m) { return "nodeperc(p=" + std::to_string(m.p) + ")"; },
                        [](const CouponCollector& m) { return "coupon(K=" + std::to_string(m.K) + ")"; },
                    },
                    kind_);
}

std::vector<Rational> occupancy_pmf_exact(unsigned d, unsigned K) {
  std::vector<Rational> pmf(d + 1, Rational(0));
  if (d == 0 || K == 0) {
    pmf[0] = 1;
    return pmf;
  }
  const auto s2 = stirling2_row(K);
  BigInt d_to_K = 1;
  for (unsigned i = 0; i < K; ++i) d_to_K *= d;
  BigInt falling = 1;  // (d)_k
  for (unsigned k = 0; k <= std::min(d, K); ++k) {
    if (k > 0) falling *= (d - k + 1);
    pmf[k] = Rational(falling * s2[k], d_to_K);
  }
  return pmf;
}

DiscretePmf TransmissionModel::conditional_pmf(unsigned d) const {
  return std::visit(Overloaded{
                        [d](const Bernoulli& m) { return binomial_pmf(d, m.p); },
                        [d](const NodePercolation& m) {
                          if (d == 0 || m.p == 0.0) return DiscretePmf::point_mass(0);
                          if (m.p == 1.0) return DiscretePmf::point_mass(d);
                          std::vector<double> w(d + 1, 0.0);
                          w[0] = 1.0 - m.p;
                          w[d] = m.p;
                          return DiscretePmf(std::move(w));
                        },
                        [d](const CouponCollector& m) {
                          const auto exact = occupancy_pmf_exact(d, m.K);
                          std::vector<double> w(exact.size());
                          for (std::size_t k = 0; k < w.size(); ++k) w[k] = exact[k].convert_to<double>();
                          return DiscretePmf(std::move(w));
                        },
                    },
                    kind_);
}

DiscretePmf conditional_transmitter_pmf(const TransmissionModel& model, unsigned d) {
  return model.conditional_pmf(d);
}

int TransmissionModel::sample(int d, Rng& rng) const {
  return std::visit(Overloaded{
                        [&](const Bernoulli& m) {
                          int t = 0;
                          for (int i = 0; i < d; ++i) t += uniform01(rng) < m.p ? 1 : 0;
                          return t;
                        },
                        [&](const NodePercolation& m) { return uniform01(rng) < m.p ? d : 0; },
                        [&](const CouponCollector& m) {
                          if (d == 0 || m.K == 0) return 0;
                          std::vector<std::uint64_t> picks(m.K);
                          for (auto& pick : picks) pick = uniform_below(rng, static_cast<std::uint64_t>(d));
                          std::sort(picks.begin(), picks.end());
                          return static_cast<int>(std::unique(picks.begin(), picks.end()) - picks.begin());
                        },
                    },
                    kind_);
}

// ---------------------------------------------------------------------------
// Moments and joint law

bool Moments::second_moment_divergent() const { return std::isinf(total_second); }
bool Moments::mixed_divergent() const { return std::isinf(mixed); }

PowerLawOccupancy::PowerLawOccupancy(double beta, unsigned K)
    : beta_(beta), K_(K), zeta_beta_(zeta(beta)) {
  if (K > kMaxTrials) {
    throw DomainError("power-law coupon collector: closed form limited to K <= " +
                      std::to_string(kMaxTrials));
  }
  const auto s2 = stirling2_row(K);
  coeffs_.resize(K + 1);
  for (unsigned k = 0; k <= K; ++k) {
    const auto s1 = stirling1_signed_row(k);
    coeffs_[k].resize(k + 1);
    for (unsigned j = 0; j <= k; ++j) coeffs_[k][j] = BigInt(s2[k] * s1[j]).convert_to<double>();
  }
  polylogs_.reserve(K + 2);
  for (unsigned i = 0; i <= K + 1; ++i) polylogs_.emplace_back(beta + static_cast<double>(i) - 1.0);
}

double PowerLawOccupancy::weighted_mass(unsigned k, unsigned a, double x) const {
  if (k > K_) return 0.0;
  double sum = 0.0;
  for (unsigned j = 0; j <= k; ++j) {
    const double c = coeffs_[k][j];
    if (c == 0.0) continue;
    // order beta + K - j - a  ->  index K - j - a + 1
    sum += c * polylogs_[K_ - j - a + 1](x);
  }
  return sum / zeta_beta_;
}

JointDegreeLaw::JointDegreeLaw(DegreeLaw degree, TransmissionModel transmission)
    : degree_(std::move(degree)), transmission_(transmission) {}

std::string JointDegreeLaw::name() const { return degree_.name() + " + " + transmission_.name(); }

std::vector<JointAtom> JointDegreeLaw::atoms(double tail_mass) const {
  if (degree_.is_power_law()) {
    throw DomainError("joint atoms: power-law support is not enumerable");
  }
  const DiscretePmf pmf = degree_.truncated_pmf(tail_mass);
  std::vector<JointAtom> out;
  for (std::size_t d = pmf.min_support(); d <= pmf.max_support(); ++d) {
    const double pd = pmf[d];
    if (pd == 0.0) continue;
    const DiscretePmf cond = transmission_.conditional_pmf(static_cast<unsigned>(d));
    for (std::size_t t = cond.min_support(); t <= cond.max_support(); ++t) {
      const double pt = cond[t];
      if (pt > 0.0) out.push_back({static_cast<int>(d), static_cast<int>(t), pd * pt});
    }
  }
  return out;
}

Moments JointDegreeLaw::moments() const {
  Moments m;
  m.total_mean = degree_.mean();
  m.total_second = degree_.second_moment();
  std::visit(Overloaded{
                 [&](const TransmissionModel::Bernoulli& b) {
                   m.transmitter_mean = b.p * m.total_mean;
                   m.mixed = b.p == 0.0 ? 0.0 : b.p * m.total_second;
                 },
                 [&](const TransmissionModel::NodePercolation& b) {
                   m.transmitter_mean = b.p * m.total_mean;
                   m.mixed = b.p == 0.0 ? 0.0 : b.p * m.total_second;
                 },
                 [&](const TransmissionModel::CouponCollector& c) {
                   if (c.K == 0) return;
                   if (const auto* pl = std::get_if<DegreeLaw::PowerLaw>(&degree_.kind())) {
                     const PowerLawOccupancy occ(pl->beta, c.K);
                     for (unsigned k = 1; k <= c.K; ++k) {
                       m.transmitter_mean += k * occ.weighted_mass(k, 0, 1.0);
                       m.mixed += k * occ.weighted_mass(k, 1, 1.0);
                     }
                     return;
                   }
                   const DiscretePmf pmf = degree_.truncated_pmf(kDefaultTailMass);
                   for (std::size_t d = pmf.min_support(); d <= pmf.max_support(); ++d) {
                     const double g = expected_distinct(static_cast<unsigned>(d), c.K);
                     m.transmitter_mean += pmf[d] * g;
                     m.mixed += pmf[d] * g * static_cast<double>(d);
                   }
                 },
             },
             transmission_.kind());
  m.receiver_mean = m.total_mean - m.transmitter_mean;
  return m;
}

DegreeSample JointDegreeLaw::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw DomainError("sample: n must be positive");
  const DegreeSampler draw_degree(degree_);
  Rng rng(mix_seed(seed));
  DegreeSample out(n);
  for (auto& node : out) {
    node.total = draw_degree(rng);
    node.transmitter = transmission_.sample(node.total, rng);
  }
  return out;
}

// ---------------------------------------------------------------------------
// DegreeSampler

namespace {
constexpr std::size_t kPowerLawTable = std::size_t{1} << 14;
}

DegreeSampler::DegreeSampler(const DegreeLaw& law) : law_(law) {
  DiscretePmf pmf;
  if (const auto* pl = std::get_if<DegreeLaw::PowerLaw>(&law.kind())) {
    const double z = zeta(pl->beta);
    const double needed =
        std::ceil(std::pow(kDefaultTailMass * (pl->beta - 1.0) * z, 1.0 / (1.0 - pl->beta)));
    const auto size = static_cast<std::size_t>(std::min(needed, static_cast<double>(kPowerLawTable)));
    cdf_.resize(size);
    offset_ = 1;
    double sum = 0.0, carry = 0.0;
    for (std::size_t k = 1; k <= size; ++k) {
      const double y = std::pow(static_cast<double>(k), -pl->beta) / z - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
      cdf_[k - 1] = sum;
    }
    return;
  }
  pmf = law.truncated_pmf(kDefaultTailMass);
  offset_ = pmf.min_support();
  cdf_.resize(pmf.weights().size());
  std::partial_sum(pmf.weights().begin(), pmf.weights().end(), cdf_.begin());
}

int DegreeSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) {
    if (law_.is_power_law()) return sample_tail(rng);
    return static_cast<int>(offset_ + cdf_.size() - 1);
  }
  return static_cast<int>(offset_ + static_cast<std::size_t>(it - cdf_.begin()));
}

int DegreeSampler::sample_tail(Rng& rng) const {
  const double beta = std::get<DegreeLaw::PowerLaw>(law_.kind()).beta;
  const double first = static_cast<double>(offset_ + cdf_.size());  // smallest tail value
  // Proposal: floor(Y), Y Pareto on [first, inf) with density ~ y^-beta, so
  // P{k} ~ I(k) = int_k^{k+1} y^-beta dy, and k^-beta / I(k) <= (1 + 1/first)^beta.
  const double bound = std::pow(1.0 + 1.0 / first, beta);
  for (;;) {
    const double y = first * std::pow(1.0 - uniform01(rng), -1.0 / (beta - 1.0));
    if (!(y < 2e9)) continue;
    const double k = std::floor(y);
    const double mass = -std::pow(k, 1.0 - beta) * std::expm1((1.0 - beta) * std::log1p(1.0 / k)) /
                        (beta - 1.0);
    if (uniform01(rng) * bound * mass <= std::pow(k, -beta)) return static_cast<int>(k);
  }
}

}  // namespace viralcm

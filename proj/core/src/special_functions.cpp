#include "viralcm/special_functions.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/zeta.hpp>

namespace viralcm {

double zeta(double s) {
  if (!(s > 1.0 + 1e-6)) {
    throw DomainError("zeta: argument must exceed 1, got " + std::to_string(s));
  }
  return boost::math::zeta(s);
}

double zeta_continued(double s) {
  if (s == 1.0) throw DomainError("zeta: pole at s = 1");
  return boost::math::zeta(s);
}

std::vector<BigInt> stirling2_row(unsigned n) {
  std::vector<BigInt> row(n + 1, 0);
  row[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    // {m,k} = {m-1,k-1} + k {m-1,k}, updated in place from the right.
    for (unsigned k = m; k >= 1; --k) {
      row[k] = row[k - 1] + BigInt(k) * row[k];
    }
    row[0] = 0;
  }
  return row;
}

BigInt stirling2(unsigned n, unsigned k) {
  if (k > n) return 0;
  return stirling2_row(n)[k];
}

std::vector<BigInt> stirling1_signed_row(unsigned n) {
  std::vector<BigInt> row(n + 1, 0);
  row[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    for (unsigned k = m; k >= 1; --k) {
      row[k] = row[k - 1] - BigInt(m - 1) * row[k];
    }
    row[0] = 0;
  }
  return row;
}

DiscretePmf::DiscretePmf(std::vector<double> weights, std::size_t offset,
                         double tail_mass)
    : weights_(std::move(weights)), offset_(offset), tail_mass_(tail_mass) {
  if (weights_.empty()) throw DomainError("DiscretePmf: empty support");
  if (!(tail_mass_ >= 0.0 && tail_mass_ <= 1.0)) {
    throw DomainError("DiscretePmf: tail mass outside [0, 1]");
  }
  double total = tail_mass_;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("DiscretePmf: weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw DomainError("DiscretePmf: weights sum to " + std::to_string(total));
  }
}

DiscretePmf DiscretePmf::from_values(std::span<const int> values) {
  if (values.empty()) throw DomainError("DiscretePmf: no values");
  int hi = 0;
  for (int v : values) {
    if (v < 0) throw DomainError("DiscretePmf: negative value");
    hi = std::max(hi, v);
  }
  std::vector<double> counts(static_cast<std::size_t>(hi) + 1, 0.0);
  for (int v : values) counts[static_cast<std::size_t>(v)] += 1.0;
  const auto n = static_cast<double>(values.size());
  for (double& c : counts) c /= n;
  return DiscretePmf(std::move(counts));
}

DiscretePmf DiscretePmf::point_mass(std::size_t k) {
  return DiscretePmf({1.0}, k);
}

double DiscretePmf::operator[](std::size_t k) const {
  if (k < offset_ || k - offset_ >= weights_.size()) return 0.0;
  return weights_[k - offset_];
}

double DiscretePmf::mean() const {
  double m = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    m += static_cast<double>(offset_ + j) * weights_[j];
  }
  return m;
}

double DiscretePmf::second_moment() const {
  double m = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    const auto k = static_cast<double>(offset_ + j);
    m += k * k * weights_[j];
  }
  return m;
}

namespace {

void check_unit_interval(double x, const char* who) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(who) + ": argument outside [0, 1]");
  }
}

}  // namespace

double pgf_eval(const DiscretePmf& pmf, double x) {
  check_unit_interval(x, "pgf_eval");
  const auto w = pmf.weights();
  double acc = 0.0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) acc = acc * x + *it;
  if (pmf.min_support() > 0) {
    acc *= std::pow(x, static_cast<double>(pmf.min_support()));
  }
  return acc;
}

double pgf_derivative(const DiscretePmf& pmf, double x) {
  check_unit_interval(x, "pgf_derivative");
  const std::size_t lo = std::max<std::size_t>(1, pmf.min_support());
  const std::size_t hi = pmf.max_support();
  if (hi < lo) return 0.0;
  double acc = 0.0;
  for (std::size_t k = hi + 1; k-- > lo;) {
    acc = acc * x + static_cast<double>(k) * pmf[k];
  }
  if (lo > 1) acc *= std::pow(x, static_cast<double>(lo - 1));
  return acc;
}

}  // namespace viralcm

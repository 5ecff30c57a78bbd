#include <cmath>
#include <numbers>
#include <string>

#include "viralcm/special_functions.hpp"

namespace viralcm {

namespace {

constexpr int kLogTerms = 48;
constexpr double kNearIntegerBand = 1e-3;

}  // namespace

double polylog_series(double s, double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("polylog_series: argument outside [0, 1)");
  }
  if (x == 0.0) return 0.0;
  const double log_x = std::log(x);
  double sum = 0.0;
  double carry = 0.0;
  for (double k = 1.0;; k += 1.0) {
    const double term = std::exp(k * log_x - s * std::log(k));
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    // Ratio of consecutive terms is x (k/(k+1))^s, non-increasing once
    // k > -s, so the remainder is bounded by a geometric tail.
    const double ratio = x * std::pow(k / (k + 1.0), s);
    if (ratio < 1.0) {
      const double tail = term * ratio / (1.0 - ratio);
      if (term <= 1e-17 * sum && tail <= 1e-17 * sum) break;
      if (tail < 1e-300) break;
    }
  }
  return sum;
}

Polylog::Polylog(double s) : s_(s) {
  const double nearest = std::round(s);
  if (s == nearest && s >= 1.0) {
    method_ = Method::kLogInteger;
    integer_order_ = static_cast<int>(nearest);
    for (int k = 1; k < integer_order_; ++k) harmonic_ += 1.0 / k;
  } else if (nearest >= 1.0 && std::abs(s - nearest) < kNearIntegerBand) {
    method_ = Method::kSeries;
    return;
  } else {
    method_ = Method::kLogNonInteger;
    gamma_term_ = std::tgamma(1.0 - s);
  }
  coeffs_.resize(kLogTerms);
  double factorial = 1.0;
  for (int k = 0; k < kLogTerms; ++k) {
    if (k > 0) factorial *= k;
    if (method_ == Method::kLogInteger && k == integer_order_ - 1) {
      coeffs_[static_cast<std::size_t>(k)] = 0.0;
      continue;
    }
    coeffs_[static_cast<std::size_t>(k)] = zeta_continued(s - k) / factorial;
  }
}

double Polylog::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("polylog: argument outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) {
    if (s_ <= 1.0) {
      throw DomainError("polylog: diverges at x = 1 for order " + std::to_string(s_));
    }
    return zeta(s_);
  }
  if (x <= 0.5 || method_ == Method::kSeries) return polylog_series(s_, x);

  const double mu = std::log(x);
  double power = 1.0;
  double sum = 0.0;
  for (double c : coeffs_) {
    sum += c * power;
    power *= mu;
  }
  if (method_ == Method::kLogNonInteger) {
    sum += gamma_term_ * std::pow(-mu, s_ - 1.0);
  } else {
    const int m = integer_order_ - 1;
    double lead = 1.0;
    for (int k = 1; k <= m; ++k) lead *= mu / k;
    sum += lead * (harmonic_ - std::log(-mu));
  }
  return sum;
}

double polylog(double s, double x) {
  if (x >= 0.0 && x <= 0.5) return polylog_series(s, x);
  return Polylog(s)(x);
}

}  // namespace viralcm

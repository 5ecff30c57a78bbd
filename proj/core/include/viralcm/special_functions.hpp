#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace viralcm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a requested expectation is infinite (e.g. E[D^2] for a heavy tail).
class DivergenceError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Riemann zeta for real s > 1. Throws DomainError for s <= 1 + 1e-6.
double zeta(double s);

/// Riemann zeta on the whole real line except the pole at s = 1
/// (analytic continuation). Used internally by the polylog expansion.
double zeta_continued(double s);

/// Li_s(x) = sum_{k>=1} k^{-s} x^k for x in [0, 1].
///
/// x <= 1/2 uses the defining series with compensated summation. Above 1/2
/// the expansion in mu = ln x around the singular point is used, which
/// converges geometrically for |mu| < 2 pi. Orders within 1e-3 of a positive
/// integer (but not equal to it) fall back to the defining series.
double polylog(double s, double x);

/// Evaluator for a fixed order s. Precomputes the zeta coefficients of the
/// logarithmic expansion so repeated evaluation near x = 1 stays cheap.
class Polylog {
 public:
  explicit Polylog(double s);

  double operator()(double x) const;
  double order() const { return s_; }

 private:
  enum class Method { kSeries, kLogNonInteger, kLogInteger };

  double s_;
  Method method_;
  std::vector<double> coeffs_;  // zeta(s - k) / k!
  double gamma_term_ = 0.0;     // Gamma(1 - s) for the non-integer expansion
  double harmonic_ = 0.0;       // H_{n-1} for integer order n
  int integer_order_ = 0;
};

/// Defining series with compensated summation; exposed for tests.
double polylog_series(double s, double x);

/// Stirling number of the second kind {n over k}, exact.
BigInt stirling2(unsigned n, unsigned k);

/// Row {n over 0..n} of the second-kind triangle, exact.
std::vector<BigInt> stirling2_row(unsigned n);

/// Signed Stirling numbers of the first kind s(n, 0..n): falling factorial
/// (x)_n = sum_j s(n, j) x^j.
std::vector<BigInt> stirling1_signed_row(unsigned n);

/// Probability mass function on consecutive non-negative integers
/// [offset, offset + weights.size()). Mass beyond the stored support is
/// recorded in tail_mass; weights plus tail_mass sum to 1 within 1e-9.
class DiscretePmf {
 public:
  static constexpr double kSumTolerance = 1e-9;

  DiscretePmf() = default;
  explicit DiscretePmf(std::vector<double> weights, std::size_t offset = 0,
                       double tail_mass = 0.0);

  /// Normalized empirical law of a list of non-negative integer values.
  static DiscretePmf from_values(std::span<const int> values);

  /// Point mass at k.
  static DiscretePmf point_mass(std::size_t k);

  std::size_t min_support() const { return offset_; }
  std::size_t max_support() const { return offset_ + weights_.size() - 1; }
  std::span<const double> weights() const { return weights_; }
  double tail_mass() const { return tail_mass_; }

  /// P{X = k}; zero outside the stored support.
  double operator[](std::size_t k) const;

  double mean() const;
  double second_moment() const;

 private:
  std::vector<double> weights_{1.0};
  std::size_t offset_ = 0;
  double tail_mass_ = 0.0;
};

/// E[x^X] for x in [0, 1].
double pgf_eval(const DiscretePmf& pmf, double x);

/// E[X x^(X-1)] for x in [0, 1]; equals the mean at x = 1.
double pgf_derivative(const DiscretePmf& pmf, double x);

}  // namespace viralcm

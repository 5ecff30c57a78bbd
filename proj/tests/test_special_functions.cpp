#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "viralcm/population.hpp"
#include "viralcm/special_functions.hpp"

using namespace viralcm;

namespace {

constexpr double kPi = std::numbers::pi;

// Sum of k^-s for k = 1..n plus the Euler-Maclaurin tail.
double zeta_brute(double s, long n = 1000000) {
  long double sum = 0.0L;
  for (long k = n; k >= 1; --k) sum += std::pow(static_cast<long double>(k), -static_cast<long double>(s));
  const long double N = n;
  sum += std::pow(N, 1.0L - s) / (s - 1.0L) - std::pow(N, -static_cast<long double>(s)) / 2.0L +
         s * std::pow(N, -static_cast<long double>(s) - 1.0L) / 12.0L;
  return static_cast<double>(sum);
}

// Direct sum of k^-s x^k until the terms are negligible, largest k first.
double polylog_brute(double s, double x) {
  if (x == 0.0) return 0.0;
  long n = 1;
  while (std::pow(static_cast<long double>(x), n) > 1e-22L && n < 50000000) n *= 2;
  long double sum = 0.0L;
  const long double lx = std::log(static_cast<long double>(x));
  for (long k = n; k >= 1; --k) sum += std::exp(k * lx - s * std::log(static_cast<long double>(k)));
  return static_cast<double>(sum);
}

BigInt binomial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Inclusion-exclusion: {n,k} = (1/k!) sum_j (-1)^j C(k,j) (k-j)^n.
BigInt stirling2_inclusion_exclusion(unsigned n, unsigned k) {
  BigInt sum = 0, factorial = 1;
  for (unsigned i = 2; i <= k; ++i) factorial *= i;
  for (unsigned j = 0; j <= k; ++j) {
    BigInt term = binomial(k, j) * boost::multiprecision::pow(BigInt(k - j), n);
    sum += (j % 2 == 0) ? term : BigInt(-term);
  }
  return sum / factorial;
}

}  // namespace

TEST(Zeta, ClassicalValues) {
  EXPECT_NEAR(zeta(2.0), kPi * kPi / 6.0, 1e-12);
  EXPECT_NEAR(zeta(4.0), std::pow(kPi, 4) / 90.0, 1e-12);
  EXPECT_NEAR(zeta(2.0), 1.6449340668, 1e-10);
}

TEST(Zeta, MatchesDirectSummation) {
  for (double s : {1.2, 1.45, 2.2, 2.45, 3.2, 3.5}) {
    EXPECT_NEAR(zeta(s), zeta_brute(s), 1e-10) << "s=" << s;
  }
}

TEST(Zeta, NormalizesZipfLaw) {
  const double v = zeta(2.45);
  long double mass = 0.0L;
  for (long k = 1000000; k >= 1; --k) mass += std::pow(static_cast<long double>(k), -2.45L) / v;
  const double tail = std::pow(1e6, -1.45) / 1.45 / v;
  EXPECT_NEAR(static_cast<double>(mass) + tail, 1.0, 1e-9);
}

TEST(Zeta, ZipfMeanNearTwo) {
  EXPECT_NEAR(zeta(1.45) / zeta(2.45), 2.0, 0.1);
}

TEST(Zeta, DomainErrors) {
  EXPECT_THROW(zeta(1.0), DomainError);
  EXPECT_THROW(zeta(0.5), DomainError);
  EXPECT_THROW(zeta(1.0 + 1e-7), DomainError);
  EXPECT_NO_THROW(zeta(1.0 + 1e-5));
}

TEST(Polylog, SpecialPoints) {
  for (double s : {0.5, 1.0, 2.45, 7.0}) EXPECT_EQ(polylog(s, 0.0), 0.0);
  EXPECT_NEAR(polylog(2.0, 1.0), kPi * kPi / 6.0, 1e-12);
  for (double s : {1.2, 2.45, 3.2}) EXPECT_NEAR(polylog(s, 1.0), zeta(s), 1e-12 * zeta(s));
  // Li_1(x) = -ln(1 - x).
  for (double x : {0.1, 0.5, 0.9, 0.999}) EXPECT_NEAR(polylog(1.0, x), -std::log1p(-x), 1e-12);
}

TEST(Polylog, MatchesDirectSummation) {
  const std::vector<double> orders = {1.0,    1.0005, 1.2, 1.45, 1.5,    2.0,
                                      2.2,    2.45,   3.0, 3.2,  2.9995, 5.45};
  const std::vector<double> xs = {0.01, 0.3, 0.5, 0.5000001, 0.6, 0.8, 0.9, 0.97, 0.99, 0.999, 0.9999};
  for (double s : orders) {
    for (double x : xs) {
      const double expected = polylog_brute(s, x);
      EXPECT_NEAR(polylog(s, x), expected, 1e-10 * std::max(1.0, expected)) << "s=" << s << " x=" << x;
    }
  }
}

TEST(Polylog, EvaluatorAgreesWithFreeFunction) {
  for (double s : {1.45, 2.0, 2.45}) {
    const Polylog li(s);
    for (double x = 0.0; x <= 1.0; x += 0.0625) EXPECT_DOUBLE_EQ(li(x), polylog(s, x));
  }
}

TEST(Polylog, HalfPointOracle) {
  EXPECT_NEAR(polylog(2.45, 0.5), polylog_brute(2.45, 0.5), 1e-12);
}

TEST(Polylog, MonotoneInX) {
  for (double s : {1.0, 1.2, 1.45, 2.0, 2.45, 3.2, 4.0}) {
    const Polylog li(s);
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = s > 1.0 ? i / 2000.0 : std::min(i / 2000.0, 0.9999);
      const double v = li(x);
      EXPECT_GE(v, prev) << "s=" << s << " x=" << x;
      prev = v;
    }
  }
}

TEST(Polylog, DomainErrors) {
  EXPECT_THROW(polylog(2.0, -0.1), DomainError);
  EXPECT_THROW(polylog(2.0, 1.1), DomainError);
  EXPECT_THROW(polylog(1.0, 1.0), DomainError);
  EXPECT_THROW(polylog(0.5, 1.0), DomainError);
  EXPECT_THROW(polylog_series(2.0, 1.0), DomainError);
}

TEST(Stirling2, Examples) {
  EXPECT_EQ(stirling2(3, 2), 3);
  for (unsigned k = 0; k <= 10; ++k) EXPECT_EQ(stirling2(k, k), 1) << k;
  EXPECT_EQ(stirling2(10, 4), 34105);
  EXPECT_EQ(stirling2(0, 0), 1);
  EXPECT_EQ(stirling2(5, 0), 0);
  EXPECT_EQ(stirling2(3, 7), 0);
}

TEST(Stirling2, RecurrenceUpToThirty) {
  for (unsigned n = 1; n <= 30; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      EXPECT_EQ(stirling2(n, k), stirling2(n - 1, k - 1) + k * stirling2(n - 1, k)) << n << "," << k;
    }
  }
}

TEST(Stirling2, MatchesInclusionExclusion) {
  for (unsigned n = 0; n <= 25; ++n) {
    const std::vector<BigInt> row = stirling2_row(n);
    ASSERT_EQ(row.size(), n + 1);
    for (unsigned k = 0; k <= n; ++k) EXPECT_EQ(row[k], stirling2_inclusion_exclusion(n, k));
  }
}

TEST(Stirling1, FallingFactorialExpansion) {
  for (unsigned n = 0; n <= 12; ++n) {
    const std::vector<BigInt> s = stirling1_signed_row(n);
    for (long x = -3; x <= 15; ++x) {
      BigInt falling = 1;
      for (unsigned i = 0; i < n; ++i) falling *= BigInt(x - static_cast<long>(i));
      BigInt poly = 0, power = 1;
      for (unsigned j = 0; j <= n; ++j) {
        poly += s[j] * power;
        power *= x;
      }
      EXPECT_EQ(poly, falling) << "n=" << n << " x=" << x;
    }
  }
}

TEST(DiscretePmf, ValidatesNormalization) {
  EXPECT_THROW(DiscretePmf({0.5, 0.4}), DomainError);
  EXPECT_THROW(DiscretePmf({0.5, -0.1, 0.6}), DomainError);
  EXPECT_NO_THROW(DiscretePmf({0.5, 0.5 + 5e-10}));
  EXPECT_NO_THROW(DiscretePmf({0.5, 0.4}, 0, 0.1));
  const DiscretePmf pmf({0.25, 0.75}, 3);
  EXPECT_EQ(pmf[2], 0.0);
  EXPECT_EQ(pmf[3], 0.25);
  EXPECT_EQ(pmf[4], 0.75);
  EXPECT_DOUBLE_EQ(pmf.mean(), 3.75);
  EXPECT_DOUBLE_EQ(pmf.second_moment(), 0.25 * 9 + 0.75 * 16);
}

TEST(DiscretePmf, FromValuesAndPointMass) {
  const std::vector<int> values = {2, 2, 3, 5};
  const DiscretePmf pmf = DiscretePmf::from_values(values);
  EXPECT_DOUBLE_EQ(pmf[2], 0.5);
  EXPECT_DOUBLE_EQ(pmf[5], 0.25);
  EXPECT_DOUBLE_EQ(pmf.mean(), 3.0);
  const DiscretePmf one = DiscretePmf::point_mass(4);
  EXPECT_EQ(pgf_eval(one, 0.5), 0.0625);
}

TEST(PgfEval, OneAtOne) {
  const std::vector<DiscretePmf> pmfs = {DiscretePmf::point_mass(0), DiscretePmf::point_mass(7),
                                         DiscretePmf({0.1, 0.2, 0.3, 0.4}),
                                         DegreeLaw::poisson(6.0).truncated_pmf()};
  for (const auto& pmf : pmfs) EXPECT_NEAR(pgf_eval(pmf, 1.0), 1.0, 1e-9);
}

TEST(PgfEval, PoissonClosedForm) {
  const DiscretePmf pmf = DegreeLaw::poisson(2.0).truncated_pmf(1e-12);
  EXPECT_NEAR(pgf_eval(pmf, 0.3), std::exp(2.0 * (0.3 - 1.0)), 1e-8);
  for (double x = 0.0; x <= 1.0; x += 0.05) {
    EXPECT_NEAR(pgf_eval(pmf, x), std::exp(2.0 * (x - 1.0)), 1e-8);
    EXPECT_NEAR(pgf_derivative(pmf, x), 2.0 * std::exp(2.0 * (x - 1.0)), 1e-8);
  }
  EXPECT_NEAR(pgf_derivative(pmf, 1.0), pmf.mean(), 1e-12);
}

TEST(PgfEval, ZipfPgfIsPolylogRatio) {
  for (double beta : {2.45, 3.2}) {
    const DegreeLaw law = DegreeLaw::power_law(beta);
    const double z = zeta(beta);
    for (double x : {0.1, 0.5, 0.8, 0.95, 0.999}) {
      long double g = 0.0L, dg = 0.0L;
      for (long k = 200000; k >= 1; --k) {
        const long double p = std::pow(static_cast<long double>(k), -static_cast<long double>(beta)) / z;
        g += p * std::pow(static_cast<long double>(x), k);
        dg += p * k * std::pow(static_cast<long double>(x), k - 1);
      }
      EXPECT_NEAR(law.pgf(x), polylog(beta, x) / z, 1e-12);
      EXPECT_NEAR(law.pgf(x), static_cast<double>(g), 1e-10);
      EXPECT_NEAR(law.pgf_derivative(x), polylog(beta - 1.0, x) / (x * z), 1e-10);
      EXPECT_NEAR(law.pgf_derivative(x), static_cast<double>(dg), 1e-8);
    }
    EXPECT_NEAR(law.pgf(1.0), 1.0, 1e-12);
    EXPECT_NEAR(law.pgf_derivative(1.0), law.mean(), 1e-10);
  }
}

TEST(PgfEval, MonotoneAndConvex) {
  const std::vector<DiscretePmf> pmfs = {DiscretePmf({0.1, 0.2, 0.3, 0.4}),
                                         DegreeLaw::poisson(2.0).truncated_pmf(),
                                         DiscretePmf({0.5, 0.0, 0.0, 0.5}, 1)};
  for (const auto& pmf : pmfs) {
    std::vector<double> g(101);
    for (int i = 0; i <= 100; ++i) g[i] = pgf_eval(pmf, i / 100.0);
    for (int i = 1; i <= 100; ++i) EXPECT_GE(g[i], g[i - 1]);
    for (int i = 1; i < 100; ++i) EXPECT_GE(g[i - 1] + g[i + 1] - 2 * g[i], -1e-15);
  }
  const DegreeLaw zipf = DegreeLaw::power_law(2.45);
  std::vector<double> g(101);
  for (int i = 0; i <= 100; ++i) g[i] = zipf.pgf(i / 100.0);
  for (int i = 1; i <= 100; ++i) EXPECT_GE(g[i], g[i - 1]);
  for (int i = 1; i < 100; ++i) EXPECT_GE(g[i - 1] + g[i + 1] - 2 * g[i], -1e-13);
}

TEST(PgfEval, DomainErrors) {
  const DiscretePmf pmf({0.5, 0.5});
  EXPECT_THROW(pgf_eval(pmf, -0.01), DomainError);
  EXPECT_THROW(pgf_eval(pmf, 1.01), DomainError);
  EXPECT_THROW(pgf_derivative(pmf, 2.0), DomainError);
  EXPECT_THROW(DegreeLaw::poisson(1.0).pgf(1.5), DomainError);
}

TEST(DegreeLaw, PowerLawNeedsFiniteMean) {
  EXPECT_THROW(DegreeLaw::power_law(2.0), DomainError);
  EXPECT_THROW(DegreeLaw::power_law(1.5), DomainError);
  EXPECT_THROW(DegreeLaw::poisson(0.0), DomainError);
}

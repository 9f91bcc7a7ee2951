#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwalk/number_theory.hpp"

using namespace qwalk;

TEST(SquareFree, Examples) {
  auto d = square_free_part(4);
  EXPECT_EQ(d.c, 1u);
  EXPECT_EQ(d.s, 2u);
  d = square_free_part(45);
  EXPECT_EQ(d.c, 5u);
  EXPECT_EQ(d.s, 3u);
  d = square_free_part(1);
  EXPECT_EQ(d.c, 1u);
  EXPECT_EQ(d.s, 1u);
  for (std::uint64_t n : {67076629ull, 16761320ull}) {
    d = square_free_part(n);
    EXPECT_EQ(d.s * d.s * d.c, n);
    const auto [c, s] = oracle::square_free(n);
    EXPECT_EQ(d.c, c);
    EXPECT_EQ(d.s, s);
  }
  EXPECT_THROW(square_free_part(0), ParameterError);
}

TEST(SquareFree, LargePrimeAndPrimeSquare) {
  const std::uint64_t p = 1000000007ull;  // prime above the trial bound
  EXPECT_EQ(square_free_part(p).c, p);
  const auto d = square_free_part(p * p);
  EXPECT_EQ(d.c, 1u);
  EXPECT_EQ(d.s, p);
  const auto e = square_free_part(3 * p * p);
  EXPECT_EQ(e.c, 3u);
  EXPECT_EQ(e.s, p);
  EXPECT_THROW(square_free_part(12 * p * p), ParameterError);
  const std::uint64_t q = 1000000009ull;
  EXPECT_EQ(square_free_part(p * q).c, p * q);
  // three primes just above the trial bound
  const std::uint64_t a = 1000003, b = 1000033, c = 1000037;
  EXPECT_EQ(square_free_part(a * b * c).c, a * b * c);
  const auto sq = square_free_part(a * a * b);
  EXPECT_EQ(sq.c, b);
  EXPECT_EQ(sq.s, a);
  const auto sq2 = square_free_part(a * b * b);
  EXPECT_EQ(sq2.c, a);
  EXPECT_EQ(sq2.s, b);
}

TEST(SquareFree, AgreesWithTrialDivision) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> dist(1, 100'000'000);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = dist(rng);
    const auto d = square_free_part(n);
    const auto [c, s] = oracle::square_free(n);
    EXPECT_EQ(d.c, c) << n;
    EXPECT_EQ(d.s, s) << n;
  }
}

TEST(PerfectSquare, Examples) {
  EXPECT_FALSE(is_perfect_square(67076629));
  EXPECT_FALSE(is_perfect_square(16761320));
  EXPECT_EQ(23 * 23 + 4 * 4095 * 4095, 67076629);
  EXPECT_EQ(22 * 22 + 4 * 2047 * 2047, 16761320);
  for (std::uint64_t n = 1; n < 5000; ++n) EXPECT_TRUE(is_perfect_square(4 * (n - 1) * (n - 1)));
  EXPECT_TRUE(is_perfect_square(0));
  EXPECT_TRUE(is_perfect_square(4294967295ull * 4294967295ull));
  EXPECT_FALSE(is_perfect_square(4294967295ull * 4294967295ull - 1));
}

TEST(RecognizeInteger, Examples) {
  EXPECT_EQ(recognize_integer(2.0000000001, 1e-6), 2);
  EXPECT_FALSE(recognize_integer(1.618, 1e-6).has_value());
  EXPECT_EQ(recognize_integer(-7 + 1e-12, 1e-6), -7);
  EXPECT_THROW(recognize_integer(1.0, 0.0), ParameterError);
  EXPECT_THROW(recognize_integer(1.0, 0.5), ParameterError);
  EXPECT_FALSE(recognize_integer(std::nan(""), 1e-6).has_value());
}

TEST(Classify, Examples) {
  using K = QuadraticClass::Kind;
  EXPECT_EQ(classify_quadratic({2, 0, -2}).kind, K::all_integer);
  const double r5 = std::sqrt(5.0);
  const auto q = classify_quadratic({(1 + r5) / 2, (1 - r5) / 2});
  ASSERT_EQ(q.kind, K::quadratic);
  EXPECT_EQ(q.a, 1);
  EXPECT_EQ(q.delta, 5);
  EXPECT_EQ(q.b, (std::vector<std::int64_t>{1, -1}));
  const auto bad = classify_quadratic({1, std::sqrt(2.0)});
  EXPECT_EQ(bad.kind, K::unclassifiable);
  EXPECT_EQ(bad.reason, QuadraticClass::Reason::refuted);
  EXPECT_THROW(classify_quadratic({}), ParameterError);
}

TEST(Classify, P4NeedsTwoOffsets) {
  const double r5 = std::sqrt(5.0);
  const auto c = classify_quadratic({(1 + r5) / 2, (-1 + r5) / 2, (1 - r5) / 2, (-1 - r5) / 2});
  EXPECT_EQ(c.kind, QuadraticClass::Kind::unclassifiable);
  EXPECT_FALSE(oracle::classify({(1 + r5) / 2, (-1 + r5) / 2, (1 - r5) / 2, (-1 - r5) / 2}, 200, 10));
}

TEST(Classify, RecoversConstructedForms) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> coef(-6, 6);
  std::uniform_int_distribution<std::int64_t> dpick(2, 50);
  int checked = 0;
  while (checked < 200) {
    const auto delta = dpick(rng);
    if (!oracle::is_square_free(static_cast<std::uint64_t>(delta))) continue;
    const auto a = coef(rng);
    std::vector<std::int64_t> b(1 + rng() % 4);
    bool nonzero = false;
    for (auto& x : b) {
      // b must share a's parity for (a + b sqrt(D)) / 2 to be an algebraic integer
      x = 2 * coef(rng) + (a & 1);
      nonzero = nonzero || x != 0;
    }
    if (!nonzero) continue;
    std::vector<double> xs;
    for (auto x : b) xs.push_back((static_cast<double>(a) + static_cast<double>(x) * std::sqrt(static_cast<double>(delta))) / 2.0);
    // Tight tolerance: at 1e-6 a lone value like (5 + 13 sqrt 29) / 2 is also
    // matched by 99 sqrt 2 - 70, a Pell near-miss. The a bound must cover |a| <= 6
    // even for lone values close to 0.
    const auto c = classify_quadratic(xs, 1e-9, kDeltaMax, 20);
    ASSERT_EQ(c.kind, QuadraticClass::Kind::quadratic) << "a=" << a << " delta=" << delta;
    EXPECT_EQ(c.delta, delta);
    EXPECT_EQ((c.a - a) % 2, 0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double back = (static_cast<double>(c.a) + static_cast<double>(c.b[i]) * std::sqrt(static_cast<double>(c.delta))) / 2.0;
      EXPECT_NEAR(back, xs[i], 1e-9);
    }
    const auto o = oracle::classify(xs, 60, 2 * 20 + 2);
    ASSERT_TRUE(o.has_value());
    EXPECT_EQ(o->second, delta);
    ++checked;
  }
}

TEST(Classify, BruteForceAgreementOnSmallSets) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> small(-3, 3);
  const std::vector<double> roots = {1.0, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0), std::sqrt(6.0)};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> xs;
    const int len = 1 + trial % 3;
    for (int i = 0; i < len; ++i) {
      const double r = roots[rng() % roots.size()];
      xs.push_back((small(rng) + small(rng) * r) / 2.0);
    }
    const auto mine = classify_quadratic(xs, 1e-6, 100);
    const auto theirs = oracle::classify(xs, 100, 12);
    if (theirs) {
      ASSERT_NE(mine.kind, QuadraticClass::Kind::unclassifiable) << trial;
      EXPECT_EQ(mine.delta, theirs->second) << trial;
    } else {
      EXPECT_EQ(mine.kind, QuadraticClass::Kind::unclassifiable) << trial;
    }
  }
}

TEST(Kronecker, Examples) {
  // l = 1 already has |sqrt(5) - 2| < 0.25
  const auto first = kronecker_witness({std::sqrt(5.0)}, {0.0}, 0.25, 100);
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(first->l, 1);
  EXPECT_EQ(first->q[0], 2);
  const auto w = kronecker_witness({std::sqrt(5.0)}, {0.0}, 0.1, 100);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->l, 4);
  EXPECT_EQ(w->q[0], 9);
  EXPECT_NEAR(w->errors[0], std::abs(4 * std::sqrt(5.0) - 9), 1e-12);
  EXPECT_FALSE(kronecker_witness({0.5}, {0.25}, 0.1, 10000).has_value());
  const auto z = kronecker_witness({std::sqrt(2.0), std::sqrt(3.0)}, {0.0, 0.0}, 0.05, 100000);
  ASSERT_TRUE(z.has_value());
  for (std::size_t k = 0; k < 2; ++k) EXPECT_LT(z->errors[k], 0.05);
  EXPECT_THROW(kronecker_witness({1.0}, {}, 0.1, 10), ParameterError);
  EXPECT_THROW(kronecker_witness({1.0}, {0.0}, 0.0, 10), ParameterError);
  EXPECT_THROW(kronecker_witness({1.0}, {0.0}, 0.1, 0), ParameterError);
}

TEST(Kronecker, ScanIsEarliest) {
  const std::vector<double> lam = {std::sqrt(7.0), std::sqrt(11.0)};
  const std::vector<double> alpha = {0.3, -0.2};
  const auto w = kronecker_witness(lam, alpha, 0.02, 1000000);
  ASSERT_TRUE(w.has_value());
  for (std::int64_t l = 1; l < w->l; ++l) {
    double worst = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double x = static_cast<double>(l) * lam[k] - alpha[k];
      worst = std::max(worst, std::abs(x - std::round(x)));
    }
    ASSERT_GE(worst, 0.02) << l;
  }
  const auto c = kronecker_closest(lam, alpha, w->l);
  EXPECT_LE(c.max_error(), w->max_error());
}

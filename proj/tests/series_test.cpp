#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "hkg/series.hpp"
#include "oracle.hpp"

using hkg::Field;
using hkg::Fq;
using hkg::LaurentSeries;

namespace {

std::vector<long> ints(const LaurentSeries& s) {
  std::vector<long> out;
  for (Fq c : s.coeffs()) out.push_back(c.v);
  return out;
}

hkg::errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const hkg::error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return hkg::errc::invalid_argument;
}

}  // namespace

TEST(Series, ZeroAndMonomials) {
  const Field F = Field::make(5);
  const auto z = LaurentSeries::zero(F, 7);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.valuation(), 7);
  EXPECT_EQ(z.precision(), 7);
  const auto m = LaurentSeries::monomial(F, F.from_int(3), -2, 4);
  EXPECT_EQ(m.valuation(), -2);
  EXPECT_EQ(m.coeff(-2), F.from_int(3));
  EXPECT_EQ(m.coeff(3), F.zero());
  EXPECT_THROW((void)m.coeff(4), hkg::error);
  EXPECT_THROW(LaurentSeries::monomial(F, F.one(), 5, 5), hkg::error);
  // Leading zeros are stripped.
  const auto s = oracle::make(F, -1, {0, 0, 2, 1}, 5);
  EXPECT_EQ(s.valuation(), 1);
  EXPECT_EQ(s.relative_precision(), 4);
}

TEST(Series, WorkedArithmeticExamples) {
  const Field F = Field::make(5);
  const int N = 10;
  const auto t = LaurentSeries::variable(F, N);
  const auto one = LaurentSeries::constant(F, F.one(), N);
  const auto tinv = LaurentSeries::monomial(F, F.one(), -1, N);
  EXPECT_TRUE(agree(t * tinv, one.truncated((t * tinv).precision())));
  EXPECT_EQ((t * tinv).valuation(), 0);

  const auto prod = (one + t) * (one - t);
  EXPECT_EQ(ints(prod)[0], 1);
  EXPECT_EQ(ints(prod)[2], 4);
  EXPECT_EQ(prod.valuation(), 0);
  EXPECT_EQ(prod.precision(), N);

  const auto a = LaurentSeries::monomial(F, F.one(), -5, 12) + LaurentSeries::monomial(F, F.one(), 1, 12);
  const auto b = LaurentSeries::monomial(F, F.one(), -5, 12);
  const auto q = a / b;
  EXPECT_TRUE(agree(q, oracle::divide(a, b)));
  EXPECT_EQ(q.coeff(0), F.one());
  EXPECT_EQ(q.coeff(6), F.one());
  EXPECT_EQ(q.precision(), 17);
}

TEST(Series, PrecisionPropagation) {
  const Field F = Field::make(7);
  const auto a = oracle::make(F, 2, {1, 3, 5}, 10);  // relative 8
  const auto b = oracle::make(F, -1, {2, 1}, 4);     // relative 5
  EXPECT_EQ((a + b).precision(), 4);
  EXPECT_EQ((a * b).precision(), std::min(2 + 4, -1 + 10));
  EXPECT_EQ(a.inverse().precision(), -2 + 8);
  EXPECT_EQ(a.inverse().relative_precision(), a.relative_precision());
  EXPECT_EQ(code_of([&] { (void)LaurentSeries::zero(F, 5).inverse(); }), hkg::errc::div_by_zero);
  EXPECT_EQ(code_of([&] { (void)(a + LaurentSeries::zero(Field::make(5), 3)); }), hkg::errc::field_mismatch);
}

TEST(Series, MultiplicationMatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  for (auto [p, k] : {std::pair{5u, 1u}, {7u, 1u}, {5u, 2u}, {7u, 3u}}) {
    const Field F = Field::make(p, k);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = oracle::random_series(F, rng, static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 30));
      const auto b = oracle::random_series(F, rng, static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 30));
      const auto fast = a * b;
      const auto slow = oracle::mul(a, b);
      EXPECT_EQ(fast.precision(), slow.precision());
      EXPECT_TRUE(agree(fast, slow));
      EXPECT_EQ(fast.valuation(), a.valuation() + b.valuation());
    }
  }
}

TEST(Series, DivisionMatchesLongDivision) {
  std::mt19937_64 rng(12);
  for (auto [p, k] : {std::pair{5u, 1u}, {5u, 2u}, {7u, 2u}}) {
    const Field F = Field::make(p, k);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = oracle::random_series(F, rng, static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 25));
      const auto b = oracle::random_series(F, rng, static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 25));
      const auto q = a / b;
      const auto slow = oracle::divide(a, b);
      EXPECT_EQ(q.precision(), slow.precision());
      EXPECT_TRUE(agree(q, slow));
    }
  }
}

TEST(Series, RingAxiomsOnRandomTriples) {
  std::mt19937_64 rng(13);
  const Field F = Field::make(7, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = oracle::random_series(F, rng, -2, 20);
    const auto b = oracle::random_series(F, rng, 1, 20);
    const auto c = oracle::random_series(F, rng, 0, 20);
    EXPECT_TRUE(agree((a * b) * c, a * (b * c)));
    EXPECT_TRUE(agree(a * (b + c), a * b + a * c));
    EXPECT_TRUE(agree(a * b, b * a));
    EXPECT_TRUE(agree(a * a.inverse(), LaurentSeries::constant(F, F.one(), 20)));
  }
}

TEST(Series, ComposeExamples) {
  const Field F = Field::make(5);
  const int N = 10;
  const auto t = LaurentSeries::variable(F, N);
  const auto g = t + t * t;
  const auto t2 = t * t;
  const auto r = compose(t2, g);
  EXPECT_EQ(ints(r.truncated(5)), (std::vector<long>{1, 2, 1}));
  EXPECT_TRUE(agree(compose(g, t), g));

  // 1/(t(1+t)) = t^{-1} - 1 + t - t^2 + ...
  const auto tinv = LaurentSeries::monomial(F, F.one(), -1, N);
  const auto geo = compose(tinv, g);
  EXPECT_EQ(geo.valuation(), -1);
  for (int e = -1; e < geo.precision(); ++e) EXPECT_EQ(geo.coeff(e), F.from_int((e + 1) % 2 == 0 ? 1 : -1)) << e;
  EXPECT_TRUE(agree(geo, oracle::divide(LaurentSeries::constant(F, F.one(), N), g)));

  EXPECT_EQ(code_of([&] { (void)compose(t2, LaurentSeries::constant(F, F.one(), N)); }),
            hkg::errc::illegal_substitution);
  EXPECT_EQ(code_of([&] { (void)compose(t2, LaurentSeries::zero(F, N)); }), hkg::errc::illegal_substitution);
}

TEST(Series, ComposeMatchesRepeatedMultiplication) {
  std::mt19937_64 rng(14);
  for (auto [p, k] : {std::pair{5u, 1u}, {7u, 2u}}) {
    const Field F = Field::make(p, k);
    for (int trial = 0; trial < 25; ++trial) {
      const int vf = static_cast<int>(rng() % 6) - 3;
      const auto f = oracle::random_series(F, rng, vf, 4 + static_cast<int>(rng() % 10));
      const int w = 1 + static_cast<int>(rng() % 2);
      const auto g = oracle::random_series(F, rng, w, 3 + static_cast<int>(rng() % 12));
      const auto fast = compose(f, g);
      const auto slow = oracle::compose(f, g, fast.precision());
      EXPECT_TRUE(agree(fast, slow)) << "trial " << trial;
      // No claimed digit may depend on unknown input digits.
      EXPECT_LE(fast.precision(), w * f.precision());
    }
  }
}

TEST(Series, ComposeIsAssociative) {
  std::mt19937_64 rng(15);
  const Field F = Field::make(5, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = oracle::random_series(F, rng, 1, 24, true);
    const auto g = oracle::random_series(F, rng, 1, 24, true);
    const auto h = oracle::random_series(F, rng, 1, 24, true);
    EXPECT_TRUE(agree(compose(compose(f, g), h), compose(f, compose(g, h))));
  }
}

TEST(Series, ReversionRoundTrips) {
  const Field F = Field::make(5);
  const int N = 8;
  const auto t = LaurentSeries::variable(F, N);
  EXPECT_TRUE(agree(reversion(t), t));
  const auto f = t + t * t;
  const auto g = reversion(f);
  EXPECT_EQ(ints(g), (std::vector<long>{1, 4, 2, 0, 4, 3, 2}));
  EXPECT_TRUE(agree(compose(f, g), t));
  EXPECT_TRUE(agree(compose(g, f), t));

  std::mt19937_64 rng(16);
  for (auto [p, k] : {std::pair{5u, 1u}, {7u, 1u}, {5u, 3u}}) {
    const Field G = Field::make(p, k);
    for (int trial = 0; trial < 15; ++trial) {
      const auto s = oracle::random_series(G, rng, 1, 40, true);
      const auto r = reversion(s);
      EXPECT_EQ(r.precision(), s.precision());
      EXPECT_TRUE(agree(compose(s, r), LaurentSeries::variable(G, s.precision())));
      EXPECT_TRUE(agree(compose(r, s), LaurentSeries::variable(G, s.precision())));
    }
  }
  EXPECT_EQ(code_of([&] { (void)reversion(t.scaled(F.from_int(2))); }), hkg::errc::not_normalized);
  EXPECT_EQ(code_of([&] { (void)reversion(t * t); }), hkg::errc::not_normalized);
}

TEST(Series, PowFracWorkedExample) {
  const Field F = Field::make(5);
  const auto u = oracle::make(F, 0, {1, 0, 1}, 6);
  const auto h = pow_frac(u, -1, 2);
  EXPECT_EQ(ints(h), (std::vector<long>{1, 0, 2, 0, 1, 0}));
  EXPECT_EQ(h.precision(), 6);
  const auto one = pow_frac(u, 0, 3);
  EXPECT_TRUE(agree(one, LaurentSeries::constant(F, F.one(), one.precision())));
}

TEST(Series, PowFracMatchesCoefficientSearch) {
  std::mt19937_64 rng(17);
  for (auto [p, k] : {std::pair{5u, 1u}, {7u, 1u}, {5u, 2u}}) {
    const Field F = Field::make(p, k);
    for (int num : {-3, -1, 1, 2}) {
      for (int den : {2, 3, 4, 6}) {
        if (den % static_cast<int>(p) == 0) continue;
        const auto f = oracle::random_series(F, rng, 0, 9, true);
        const auto h = pow_frac(f, num, den);
        const auto search = oracle::root_by_search(f, num, den, 9);
        ASSERT_EQ(search.size(), 9u);
        for (int e = 0; e < 9; ++e) EXPECT_EQ(h.coeff(e), search[static_cast<std::size_t>(e)]) << num << "/" << den;
      }
    }
  }
}

TEST(Series, PowFracInvertsPowers) {
  std::mt19937_64 rng(18);
  const Field F = Field::make(7, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const long m = std::vector<long>{2, 3, 4, 5, 6, 8, 9}[rng() % 7];
    const auto f = oracle::random_series(F, rng, static_cast<int>(m) * 2, 30, true);
    const auto h = pow_frac(f, 1, m);
    EXPECT_EQ(h.valuation(), 2);
    EXPECT_TRUE(agree(oracle::power(h, static_cast<int>(m)), f));
  }
}

TEST(Series, PowFracCanonicalRoot) {
  const Field F = Field::make(5);
  // 4 t^{-2}: square roots of 4 are 2 and 3; 2 comes first.
  const auto f = LaurentSeries::monomial(F, F.from_int(4), -2, 6);
  const auto h = pow_frac(f, 1, 2);
  EXPECT_EQ(h.valuation(), -1);
  EXPECT_EQ(h.leading(), F.from_int(2));
}

TEST(Series, PowFracErrors) {
  const Field F = Field::make(5);
  const auto u = oracle::make(F, 0, {1, 0, 0, 0, 0, 1}, 10);
  EXPECT_EQ(code_of([&] { (void)pow_frac(u, -1, 5); }), hkg::errc::wild_root);
  EXPECT_EQ(code_of([&] { (void)pow_frac(LaurentSeries::monomial(F, F.one(), 1, 5), 1, 2); }),
            hkg::errc::fractional_valuation);
  // 2 is not a square mod 5.
  EXPECT_EQ(code_of([&] { (void)pow_frac(LaurentSeries::constant(F, F.from_int(2), 5), 1, 2); }),
            hkg::errc::root_not_in_field);
  // In F_25 it is.
  const Field G = Field::make(5, 2);
  const auto r = pow_frac(LaurentSeries::constant(G, G.from_int(2), 5), 1, 2);
  EXPECT_EQ(G.mul(r.leading(), r.leading()), G.from_int(2));
}

TEST(Series, PowIntMatchesRepeatedProducts) {
  std::mt19937_64 rng(19);
  const Field F = Field::make(5, 2);
  const auto a = oracle::random_series(F, rng, -1, 15);
  for (int e = 0; e < 8; ++e) EXPECT_TRUE(agree(pow_int(a, e), oracle::power(a, e)));
  EXPECT_TRUE(agree(pow_int(a, -3), oracle::divide(LaurentSeries::constant(F, F.one(), 15), oracle::power(a, 3))));
}

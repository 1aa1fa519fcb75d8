#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "hkg/additive.hpp"
#include "oracle.hpp"

using hkg::AdditivePolynomial;
using hkg::Field;
using hkg::Fq;

namespace {

Fq random_elem(const Field& F, std::mt19937_64& rng) { return F.from_index(static_cast<std::uint32_t>(rng() % F.q())); }

// Leibniz expansion over all permutations.
Fq leibniz_det(const Field& F, const std::vector<std::vector<Fq>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Fq total = F.zero();
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Fq term = F.one();
    for (std::size_t i = 0; i < n; ++i) term = F.mul(term, m[i][perm[i]]);
    total = inversions % 2 ? F.sub(total, term) : F.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Fq frob_n(const Field& F, Fq x, int i) {
  for (int j = 0; j < i; ++j) x = F.frobenius(x);
  return x;
}

// Roots by trying every element of F_q.
std::set<std::uint32_t> roots(const AdditivePolynomial& P) {
  std::set<std::uint32_t> out;
  for (std::uint32_t v = 0; v < P.field().q(); ++v)
    if (hkg::additive_eval(P, P.field().from_index(v)) == P.field().zero()) out.insert(P.field().from_index(v).v);
  return out;
}

// Closure of w under F_p-linear combinations, by breadth-first addition.
std::set<std::uint32_t> span_closure(const Field& F, const std::vector<Fq>& w) {
  std::set<std::uint32_t> s{F.zero().v};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto x : std::vector<std::uint32_t>(s.begin(), s.end()))
      for (Fq wi : w) grew |= s.insert(F.add(Fq{x}, wi).v).second;
  }
  return s;
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

TEST(Additive, MooreDeterminantMatchesLeibniz) {
  const Field F = Field::make(5, 3);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    std::vector<Fq> w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(random_elem(F, rng));
    std::vector<std::vector<Fq>> m(n, std::vector<Fq>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = frob_n(F, w[j], static_cast<int>(i));
    EXPECT_EQ(hkg::moore_det(F, w), leibniz_det(F, m));
  }
}

TEST(Additive, SpanAndMooreAgreeAndVanishOnTheSpan) {
  std::mt19937_64 rng(12);
  for (std::uint32_t p : {5u, 7u}) {
    for (int n = 1; n <= 3; ++n) {
      const Field F = Field::make(p, n <= 2 ? 2 : 3);
      for (int trial = 0; trial < 6; ++trial) {
        std::vector<Fq> w;
        do {
          w.clear();
          for (int i = 0; i < n; ++i) w.push_back(random_elem(F, rng));
        } while (hkg::moore_det(F, w) == F.zero());
        const auto S = hkg::additive_from_span(F, w);
        const auto M = hkg::additive_from_moore(F, w);
        EXPECT_EQ(S, M);
        EXPECT_EQ(S.n(), n);
        EXPECT_TRUE(S.is_monic());
        EXPECT_EQ(roots(S), span_closure(F, w));
        const auto elems = hkg::span_elements(F, w);
        std::set<std::uint32_t> es;
        for (Fq e : elems) es.insert(e.v);
        EXPECT_EQ(es, span_closure(F, w));
        EXPECT_EQ(elems.size(), static_cast<std::size_t>(n == 1 ? p : n == 2 ? p * p : p * p * p));
      }
    }
  }
}

TEST(Additive, SingleElementClosedForm) {
  const Field F = Field::make(7, 2);
  for (std::uint32_t v = 1; v < F.q(); v += 5) {
    const Fq w = F.from_index(v);
    const std::vector<Fq> ws{w};
    const auto P = hkg::additive_from_span(F, ws);
    EXPECT_EQ(P.coeffs(), (std::vector<Fq>{F.neg(F.pow(w, 6)), F.one()}));
  }
  // X^p - X for w = 1.
  const Field G = Field::make(5);
  const std::vector<Fq> one{G.one()};
  EXPECT_EQ(hkg::additive_from_moore(G, one).coeffs(), (std::vector<Fq>{G.from_int(4), G.one()}));
}

TEST(Additive, DependentSpanIsRejected) {
  const Field F = Field::make(5, 2);
  const std::vector<Fq> w{F.from_int(1), F.from_int(2)};
  EXPECT_EQ(code_of([&] { (void)hkg::additive_from_span(F, w); }), hkg::errc::dependent_span);
  EXPECT_EQ(code_of([&] { (void)hkg::additive_from_moore(F, w); }), hkg::errc::dependent_span);
  const std::vector<Fq> zero{F.zero()};
  EXPECT_EQ(code_of([&] { (void)hkg::additive_from_span(F, zero); }), hkg::errc::dependent_span);
  EXPECT_EQ(code_of([&] { (void)hkg::additive_from_span(F, std::vector<Fq>{}); }), hkg::errc::invalid_argument);
}

TEST(Additive, RescalingScalesTheRoots) {
  const Field F = Field::make(5, 2);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Fq> w{F.one(), F.basis_element(1)};
    const auto P = hkg::additive_from_span(F, std::vector<Fq>{w[0]});
    Fq lambda;
    do lambda = random_elem(F, rng);
    while (lambda == F.zero());
    const auto Q = P.rescaled(lambda);
    std::set<std::uint32_t> expect;
    for (auto r : roots(P)) expect.insert(F.mul(lambda, Fq{r}).v);
    EXPECT_EQ(roots(Q), expect);
    EXPECT_TRUE(Q.is_monic());
    const auto Pw = hkg::additive_from_span(F, w);
    std::vector<Fq> lw{F.mul(lambda, w[0]), F.mul(lambda, w[1])};
    EXPECT_EQ(Pw.rescaled(lambda), hkg::additive_from_span(F, lw));
  }
  EXPECT_EQ(code_of([&] { (void)hkg::additive_from_span(F, std::vector<Fq>{F.one()}).rescaled(F.zero()); }),
            hkg::errc::invalid_argument);
}

TEST(Additive, EvaluationIsAdditiveOnFieldsAndSeries) {
  const Field F = Field::make(7, 2);
  std::mt19937_64 rng(14);
  std::vector<Fq> c;
  for (int i = 0; i < 3; ++i) c.push_back(random_elem(F, rng));
  const AdditivePolynomial P(F, c);
  for (int trial = 0; trial < 50; ++trial) {
    const Fq a = random_elem(F, rng), b = random_elem(F, rng);
    EXPECT_EQ(hkg::additive_eval(P, F.add(a, b)), F.add(hkg::additive_eval(P, a), hkg::additive_eval(P, b)));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = oracle::random_series(F, rng, -3, 12);
    const auto y = oracle::random_series(F, rng, -2, 12);
    const auto lhs = hkg::additive_eval(P, x + y);
    const auto rhs = hkg::additive_eval(P, x) + hkg::additive_eval(P, y);
    EXPECT_TRUE(agree(lhs, rhs));
    // P(x) against sum c_i x^{p^i} with powers by multiplication.
    auto ref = x.scaled(c[0]);
    ref = ref + oracle::power(x, 7).scaled(c[1]);
    ref = ref + oracle::power(x, 49).scaled(c[2]);
    EXPECT_TRUE(agree(hkg::additive_eval(P, x), ref));
  }
}

TEST(Additive, SeriesFrobenius) {
  const Field F = Field::make(5, 2);
  std::mt19937_64 rng(15);
  const auto x = oracle::random_series(F, rng, -2, 10);
  const auto fx = hkg::frobenius(x);
  EXPECT_EQ(fx.valuation(), -10);
  EXPECT_EQ(fx.precision(), 40);
  EXPECT_TRUE(agree(fx, oracle::power(x, 5)));
  const auto z = hkg::frobenius(hkg::LaurentSeries::zero(F, 3));
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.precision(), 15);
}

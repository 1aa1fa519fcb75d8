#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <vector>

#include "hkg/semigroup.hpp"

using hkg::MonomialShape;
using hkg::NumericalSemigroup;

namespace {

// Reachability by dynamic programming up to `limit`.
std::vector<bool> reachable(const std::vector<long>& gens, long limit) {
  std::vector<bool> in(static_cast<std::size_t>(limit + 1), false);
  in[0] = true;
  for (long x = 1; x <= limit; ++x)
    for (long g : gens)
      if (g <= x && in[static_cast<std::size_t>(x - g)]) in[static_cast<std::size_t>(x)] = true;
  return in;
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

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Shapes of one- and two-step cyclic towers: (p, m) and (p^2, p m1, m2).
std::vector<MonomialShape> tower_shapes(std::uint32_t p) {
  std::vector<MonomialShape> out;
  for (long m = 1; m < 40; ++m)
    if (m % p != 0) out.push_back({p, {1}, {static_cast<long>(p), m}});
  for (long m1 : {1L, 2L, 3L})
    for (long m2 = p * m1 + 1; m2 < p * m1 + 30; ++m2)
      if (m2 % p != 0) out.push_back({p, {1, 1}, {ipow(p, 2), p * m1, m2}});
  return out;
}

}  // namespace

TEST(Semigroup, MembershipAgreesWithEnumeration) {
  const std::vector<std::vector<long>> cases{{5, 13}, {3, 5, 7}, {25, 5, 21}, {7, 9}, {4, 6, 9}, {1}, {6, 10, 15}};
  for (const auto& g : cases) {
    const NumericalSemigroup S(5, g);
    const auto in = reachable(g, 300);
    for (long x = 0; x <= 300; ++x) {
      EXPECT_EQ(S.contains(x), in[static_cast<std::size_t>(x)]) << "x=" << x;
      if (const auto w = S.witness(x)) {
        long sum = 0;
        for (std::size_t i = 0; i < w->size(); ++i) sum += (*w)[i] * S.generators()[i];
        EXPECT_EQ(sum, x);
      }
    }
    std::vector<long> gaps;
    for (long x = 1; x <= 300; ++x)
      if (!in[static_cast<std::size_t>(x)]) gaps.push_back(x);
    EXPECT_EQ(S.gaps(), gaps);
  }
}

TEST(Semigroup, WorkedExample) {
  const NumericalSemigroup S(5, {5, 13});
  EXPECT_EQ(S.gaps().size(), 24u);  // (5 - 1)(13 - 1) / 2
  EXPECT_EQ(S.frobenius(), 47);
  EXPECT_TRUE(S.contains(26));
  EXPECT_EQ(*S.witness(26), (std::vector<long>{0, 2}));
  EXPECT_FALSE(S.contains(27));
  const auto ft = S.first_prime_to_p();
  EXPECT_EQ(ft.m, 13);
  EXPECT_EQ(ft.r, 3u);  // 0, 5, 10 come first
  EXPECT_TRUE(ft.is_last_generator);
  EXPECT_EQ(S.element(0), 0);
  EXPECT_EQ(S.element(3), 13);
  EXPECT_EQ(S.elements_below(16), (std::vector<long>{0, 5, 10, 13, 15}));
}

TEST(Semigroup, EdgeCases) {
  EXPECT_TRUE(NumericalSemigroup(5, {1}).gaps().empty());
  EXPECT_EQ(NumericalSemigroup(5, {1}).frobenius(), -1);
  EXPECT_EQ(code_of([] { (void)NumericalSemigroup(5, {2, 4}).gaps(); }), hkg::errc::infinite_gaps);
  EXPECT_EQ(code_of([] { (void)NumericalSemigroup(5, {5, 10}).first_prime_to_p(); }), hkg::errc::no_tame_element);
  EXPECT_EQ(code_of([] { NumericalSemigroup(5, {}); }), hkg::errc::invalid_argument);
  EXPECT_EQ(code_of([] { NumericalSemigroup(5, {0, 3}); }), hkg::errc::invalid_argument);
  // Non-coprime generators still answer membership.
  EXPECT_TRUE(NumericalSemigroup(5, {2, 4}).contains(6));
  EXPECT_FALSE(NumericalSemigroup(5, {2, 4}).contains(7));
}

TEST(Semigroup, MinimalGenerators) {
  const NumericalSemigroup S(5, {25, 5, 21});
  EXPECT_FALSE(S.is_minimally_generated());
  EXPECT_EQ(S.minimal_generators(), (std::vector<long>{5, 21}));
  EXPECT_TRUE(NumericalSemigroup(5, {5, 13}).is_minimally_generated());
  // <10, 15, 21>: 15 is not a multiple of 10, so all three are needed.
  EXPECT_TRUE(NumericalSemigroup(5, {10, 15, 21}).is_minimally_generated());
  const auto ft = NumericalSemigroup(5, {10, 15, 21}).first_prime_to_p();
  EXPECT_EQ(ft.m, 21);
  EXPECT_EQ(ft.r, 4u);  // 0, 10, 15, 20
}

TEST(ModuleBasis, SmallExamples) {
  const MonomialShape shape{5, {1}, {5, 13}};
  const auto b = hkg::module_basis(shape, 13);
  EXPECT_EQ(b.s, 0);
  ASSERT_EQ(b.monomials.size(), 3u);
  EXPECT_EQ(b.monomials[2].exps, (std::vector<int>{2, 0}));
  const auto c = hkg::module_basis(shape, 27);
  EXPECT_EQ(c.s, 1);
  std::vector<long> degs;
  for (const auto& m : c.monomials) degs.push_back(m.degree);
  EXPECT_EQ(degs, (std::vector<long>{0, 5, 10, 13, 15, 18, 20, 23, 25, 26}));
  EXPECT_EQ(c.index_of({0, 2}), 9);
  EXPECT_EQ(c.index_of({0, 3}), -1);
  // The exponent of f_1 stays below p.
  const auto d = hkg::module_basis(MonomialShape{5, {1}, {5, 1}}, 10);
  for (const auto& m : d.monomials) EXPECT_LT(m.exps[1], 5);
  EXPECT_TRUE(hkg::module_basis(shape, 0).monomials.empty());
  EXPECT_EQ(code_of([] { (void)hkg::module_basis(MonomialShape{5, {1, 1}, {5, 13}}, 5); }), hkg::errc::invalid_argument);
}

TEST(ModuleBasis, FlagDimensionsAndDistinctDegrees) {
  for (std::uint32_t p : {5u, 7u}) {
    for (const auto& shape : tower_shapes(p)) {
      const auto in = reachable(shape.poles, 201);
      std::size_t prev = 0;
      std::size_t i = 0;  // index of the next semigroup element
      for (long m = 1; m <= 200; ++m) {
        const auto b = hkg::module_basis(shape, m);
        ASSERT_TRUE(b.degrees_distinct()) << "poles[1]=" << shape.poles[1] << " m=" << m;
        const std::size_t dim = b.monomials.size();
        EXPECT_EQ(dim, prev + (in[static_cast<std::size_t>(m - 1)] ? 1 : 0));
        if (in[static_cast<std::size_t>(m - 1)]) {
          EXPECT_EQ(dim, ++i);  // L(m_i P) has dimension i + 1
        }
        for (const auto& mono : b.monomials) {
          EXPECT_LT(mono.degree, m);
          for (std::size_t j = 1; j < mono.exps.size(); ++j) EXPECT_LT(mono.exps[j], shape.exponent_bound(j));
        }
        prev = dim;
      }
    }
  }
}

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "hkg/cohomology.hpp"
#include "hkg/covers.hpp"

using namespace hkg;

namespace {

hkg::errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const hkg::error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return hkg::errc::invalid_argument;
}

Vec mat_vec(const Matrix& S, const Vec& v) {
  Vec r(S.rows(), 0);
  for (std::size_t i = 0; i < S.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < S.cols(); ++j) acc += static_cast<std::uint64_t>(S(i, j)) * v[j];
    r[i] = static_cast<std::uint32_t>(acc % S.p());
  }
  return r;
}

Vec add(const Vec& a, const Vec& b, std::uint32_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % p;
  return r;
}

std::vector<Vec> all_vectors(std::uint32_t p, std::size_t n) {
  std::vector<Vec> out{Vec{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> next;
    for (const auto& v : out)
      for (std::uint32_t c = 0; c < p; ++c) {
        Vec w = v;
        w.push_back(c);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

// |Z^1| and |B^1| for Z/order acting through S, by trying every C(s) and
// every b. Returns log_p |Z^1 / B^1|.
std::size_t brute_h1(const Matrix& S, std::size_t order) {
  const std::uint32_t p = S.p();
  const std::size_t n = S.rows();
  std::vector<Matrix> pw{Matrix::identity(p, n)};
  for (std::size_t g = 1; g < order; ++g) pw.push_back(pw.back() * S);
  std::size_t z = 0;
  for (const auto& v : all_vectors(p, n)) {
    std::vector<Vec> C{Vec(n, 0)};
    for (std::size_t g = 1; g < order; ++g) C.push_back(add(C[g - 1], mat_vec(pw[g - 1], v), p));
    bool ok = true;
    for (std::size_t s = 0; s < order && ok; ++s)
      for (std::size_t t = 0; t < order && ok; ++t) ok = C[(s + t) % order] == add(C[s], mat_vec(pw[s], C[t]), p);
    z += ok;
  }
  std::set<Vec> b;
  Matrix D = S;
  for (std::size_t i = 0; i < n; ++i) D(i, i) = (D(i, i) + p - 1) % p;
  for (const auto& v : all_vectors(p, n)) b.insert(mat_vec(D, v));
  std::size_t h = 0;
  for (std::size_t q = z / b.size(); q > 1; q /= p) ++h;
  return h;
}

Matrix jordan(std::uint32_t p, std::size_t n) {
  Matrix S = Matrix::identity(p, n);
  for (std::size_t i = 0; i + 1 < n; ++i) S(i, i + 1) = 1;
  return S;
}

Matrix random_unipotent(std::uint32_t p, std::size_t n, std::mt19937_64& rng) {
  Matrix S = Matrix::identity(p, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) S(i, j) = static_cast<std::uint32_t>(rng() % p);
  return S;
}

}  // namespace

TEST(Cohomology, H1MatchesBruteForceOverZ5) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const Matrix S = random_unipotent(5, n, rng);
    EXPECT_EQ(h1_cyclic(S, 1).h1, brute_h1(S, 5)) << "trial " << trial;
    // The same matrix viewed as a Z/25-module.
    EXPECT_EQ(h1_cyclic(S, 2).h1, brute_h1(S, 25)) << "trial " << trial;
  }
}

TEST(Cohomology, KnownModules) {
  // Trivial module: Hom(Z/p^i, F_p^n).
  for (std::size_t n : {1u, 4u, 7u}) EXPECT_EQ(h1_cyclic(Matrix::identity(5, n), 1).h1, n);
  // F_5[x]/(x^6) with s = 1 + x has order 25, N = x^24 = 0 and (s - 1)A of
  // codimension 1.
  const auto r = h1_cyclic(jordan(5, 6), 2);
  EXPECT_EQ(r.h1, 1u);
  EXPECT_TRUE(r.norm_zero);
  EXPECT_FALSE(r.hypothesis);
  EXPECT_EQ(r.coinvariants, 1u);
  EXPECT_EQ(code_of([] { (void)h1_cyclic(jordan(5, 6), 1); }), errc::bad_order);
  // Regular representations are induced, hence acyclic.
  Matrix shift(7, 7, 7);
  for (std::size_t i = 0; i < 7; ++i) shift((i + 1) % 7, i) = 1;
  EXPECT_EQ(h1_cyclic(shift, 1).h1, 0u);
  Matrix diag = Matrix::identity(5, 2);
  diag(0, 0) = 2;
  EXPECT_EQ(code_of([&] { (void)h1_cyclic(diag, 1); }), errc::bad_order);
  EXPECT_EQ(code_of([] { (void)h1_cyclic(Matrix(5, 2, 3), 1); }), errc::invalid_argument);
}

TEST(Cohomology, CocyclesAndCoboundaries) {
  const FiniteGroup G = FiniteGroup::cyclic(5);
  const LinearizedModule M = module_from_generators(G, 5, {jordan(5, 3)});
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    Vec b(3);
    for (auto& x : b) x = static_cast<std::uint32_t>(rng() % 5);
    const CocycleTable C = coboundary(M, b);
    EXPECT_TRUE(cocycle_check(M, C).ok);
    const auto w = coboundary_test(M, C);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(coboundary(M, *w), C);
  }
  // Count the cocycles that are not coboundaries through the library and
  // compare with the brute-force dimension.
  std::size_t cocycles = 0, coboundaries = 0;
  for (const auto& v : all_vectors(5, 3)) {
    CocycleTable C{Vec(3, 0)};
    for (std::size_t g = 1; g < 5; ++g) C.push_back(add(C[g - 1], mat_vec(M.action[g - 1], v), 5));
    if (!cocycle_check(M, C).ok) continue;
    ++cocycles;
    coboundaries += coboundary_test(M, C).has_value();
  }
  EXPECT_EQ(cocycles / coboundaries, 5u);  // h1 = 1
  EXPECT_EQ(brute_h1(jordan(5, 3), 5), 1u);

  CocycleTable broken(5, Vec(3, 0));
  broken[1] = {1, 0, 0};
  const auto chk = cocycle_check(M, broken);
  EXPECT_FALSE(chk.ok);
  broken = CocycleTable(5, Vec(3, 0));
  broken[0] = {1, 0, 0};
  EXPECT_FALSE(cocycle_check(M, broken).ok);
  EXPECT_EQ(code_of([&] { (void)cocycle_check(M, CocycleTable(4, Vec(3, 0))); }), errc::shape_error);
}

TEST(Cohomology, ModuleRelationsAreChecked) {
  Matrix diag = Matrix::identity(5, 2);
  diag(0, 0) = 2;
  EXPECT_EQ(code_of([&] { (void)module_from_generators(FiniteGroup::cyclic(5), 5, {diag}); }), errc::not_a_group);
  EXPECT_EQ(code_of([&] { (void)module_from_generators(FiniteGroup::cyclic(5), 5, {}); }), errc::shape_error);
  // Two commuting unipotents give a (Z/5)^2-module.
  const FiniteGroup E = FiniteGroup::elem_abelian(5, 2);
  const Matrix J = jordan(5, 2);
  const LinearizedModule M = module_from_generators(E, 5, {J, J * J});
  EXPECT_EQ(M.action.size(), 25u);
  // Non-commuting generators violate the table.
  Matrix K = Matrix::identity(5, 3), L = Matrix::identity(5, 3);
  K(0, 1) = 1;
  L(1, 2) = 1;
  EXPECT_EQ(code_of([&] { (void)module_from_generators(E, 5, {K, L}); }), errc::not_a_group);
}

TEST(Cohomology, LinearizedTowerAction) {
  const Field F = Field::make(5);
  const TowerAction A = as_tower(F, 13, F.one());
  const MonomialBasis basis = module_basis(A.ring().shape(), 27);
  const LinearizedModule M = linearize(A, basis);
  ASSERT_EQ(M.dim, basis.monomials.size());
  // Unipotent and upper triangular in the degree-sorted basis.
  for (std::size_t g = 0; g < 5; ++g)
    for (std::size_t i = 0; i < M.dim; ++i) {
      EXPECT_EQ(M.action[g](i, i), 1u);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(M.action[g](i, j), 0u);
    }
  EXPECT_EQ(M.action[1].pow(5), Matrix::identity(5, M.dim));
  EXPECT_EQ(M.action[2], M.action[1] * M.action[1]);
}

TEST(Cohomology, KernelOfTheAdditiveMap) {
  const Field F = Field::make(5);
  const TowerAction A = as_tower(F, 13, F.one());
  const TowerRing& R = A.ring();
  // C(s^g) = g f1 + g(g - 1)/2 is a cocycle and P(C) = g f0^13 = (s^g - 1)(f0^13 f1).
  std::vector<TowerElement> C;
  for (long g = 0; g < 5; ++g) {
    TowerElement x = R.scale(R.generator(1), F.from_int(g));
    x.add_term(F, {0, 0}, F.from_int(g * (g - 1) / 2));
    C.push_back(x);
  }
  std::vector<TowerElement> hom;
  for (long g = 0; g < 5; ++g) hom.push_back(TowerElement::monomial({1, 0}, F.from_int(g)));
  const auto wide = kernel_of_additive_map(A, additive_from_span(F, std::vector<Fq>{F.one()}), {C, hom}, 79);
  ASSERT_EQ(wide.size(), 2u);
  EXPECT_TRUE(wide[0].in_kernel);
  ASSERT_TRUE(wide[0].witness.has_value());
  for (long g = 0; g < 5; ++g) {
    const TowerElement lhs = R.sub(A.apply(static_cast<std::size_t>(g), *wide[0].witness), *wide[0].witness);
    EXPECT_EQ(lhs, TowerElement::monomial({13, 0}, F.from_int(g)));
  }
  EXPECT_TRUE(wide[1].in_kernel);
  // Below degree 78 there is no room for f0^13 f1.
  const auto narrow = kernel_of_additive_map(A, additive_from_span(F, std::vector<Fq>{F.one()}), {C}, 70);
  EXPECT_FALSE(narrow[0].in_kernel);
  EXPECT_EQ(code_of([&] { (void)kernel_of_additive_map(A, additive_from_span(F, std::vector<Fq>{F.one()}), {C}, 60); }),
            errc::degree_overflow);
}

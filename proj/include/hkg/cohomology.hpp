#pragma once

// Cocycles and coboundaries on F_p[G]-modules given by explicit matrices, and
// H^1 of cyclic p-groups as ker N / (s - 1)A.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkg/error.hpp"
#include "hkg/group.hpp"
#include "hkg/linalg.hpp"
#include "hkg/tower.hpp"

namespace hkg {

/// A finite-dimensional F_p-module with one action matrix per group element.
struct LinearizedModule {
  FiniteGroup group;
  std::uint32_t p = 0;
  std::size_t dim = 0;
  std::vector<Matrix> action;  // action[g]
};

/// Matrices of the tower action on the module spanned by `basis`.
inline LinearizedModule linearize(const TowerAction& A, const MonomialBasis& basis) {
  const ModuleCoords M(A.ring(), basis);
  LinearizedModule out;
  out.group = A.group();
  out.p = A.ring().field().p();
  out.dim = M.dim();
  for (std::size_t g = 0; g < A.group().order(); ++g)
    out.action.push_back(M.matrix_of(M, [&](const TowerElement& x) { return A.apply(g, x); }));
  return out;
}

/// Module from generator matrices, extended to all elements along the
/// group's spanning tree. The relations are checked: every product must
/// agree with the table.
inline LinearizedModule module_from_generators(const FiniteGroup& G, std::uint32_t p,
                                               const std::vector<Matrix>& gens) {
  require(gens.size() == G.generators().size(), errc::shape_error, "one matrix per generator is required");
  const std::size_t dim = gens.empty() ? 0 : gens[0].rows();
  LinearizedModule out{G, p, dim, std::vector<Matrix>(G.order())};
  out.action[0] = Matrix::identity(p, dim);
  for (std::size_t idx = 1; idx < G.bfs_order().size(); ++idx) {
    const std::size_t y = G.bfs_order()[idx];
    const auto& e = G.tree()[y];
    out.action[y] = out.action[e.parent] * gens[e.gen];
  }
  for (std::size_t x = 0; x < G.order(); ++x)
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
      require(out.action[x] * gens[gi] == out.action[G.mul(x, G.generators()[gi])], errc::not_a_group,
              "matrices do not satisfy the group relations");
  return out;
}

using CocycleTable = std::vector<Vec>;  // value per group element

struct CocycleCheck {
  bool ok = true;
  std::size_t sigma = 0, tau = 0;
};

/// C(st) = C(s) + s C(t) for all pairs, and C(1) = 0.
inline CocycleCheck cocycle_check(const LinearizedModule& M, const CocycleTable& C) {
  require(C.size() == M.group.order(), errc::shape_error, "cocycle table must cover every element");
  CocycleCheck r;
  if (!is_zero(C[0])) {
    r.ok = false;
    return r;
  }
  for (std::size_t s = 0; s < C.size(); ++s)
    for (std::size_t t = 0; t < C.size(); ++t)
      if (C[M.group.mul(s, t)] != vec_add(C[s], M.action[s].apply(C[t]), M.p)) {
        r.ok = false;
        r.sigma = s;
        r.tau = t;
        return r;
      }
  return r;
}

/// s -> (s - 1) b.
inline CocycleTable coboundary(const LinearizedModule& M, const Vec& b) {
  CocycleTable C;
  for (std::size_t g = 0; g < M.group.order(); ++g) C.push_back(vec_sub(M.action[g].apply(b), b, M.p));
  return C;
}

/// Some b with (g - 1) b = C(g) on the generators (hence everywhere, for a
/// cocycle), or nothing.
inline std::optional<Vec> coboundary_test(const LinearizedModule& M, const CocycleTable& C) {
  const auto& gens = M.group.generators();
  Matrix A(M.p, gens.size() * M.dim, M.dim);
  Vec rhs(gens.size() * M.dim);
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Matrix D = M.action[gens[gi]] - Matrix::identity(M.p, M.dim);
    for (std::size_t i = 0; i < M.dim; ++i) {
      for (std::size_t j = 0; j < M.dim; ++j) A(gi * M.dim + i, j) = D(i, j);
      rhs[gi * M.dim + i] = C[gens[gi]][i];
    }
  }
  if (gens.empty()) return Vec(M.dim, 0);
  return solve(A, rhs);
}

struct H1Report {
  std::size_t dim = 0;
  std::size_t dim_ker_norm = 0;
  std::size_t rank_sigma_minus_1 = 0;
  std::size_t h1 = 0;
  bool hypothesis = false;  // s^{p^{i-1}} acts trivially
  bool norm_zero = false;
  std::size_t coinvariants = 0;  // dim A - rank(s - 1)
};

/// H^1(Z/p^i, A) = ker N / (s - 1) A with N = 1 + s + ... + s^{p^i - 1}.
inline H1Report h1_cyclic(const Matrix& S, int i) {
  require(S.rows() == S.cols(), errc::invalid_argument, "action matrix must be square");
  require(i >= 1, errc::bad_order, "order exponent must be positive");
  const std::uint32_t p = S.p();
  const std::size_t n = S.rows();
  std::uint64_t order = 1;
  for (int j = 0; j < i; ++j) order *= p;
  const Matrix I = Matrix::identity(p, n);
  require(S.pow(order) == I, errc::bad_order, "action does not have order dividing p^" + std::to_string(i));
  Matrix N(p, n, n), P = I;
  for (std::uint64_t l = 0; l < order; ++l) {
    N = N + P;
    P = P * S;
  }
  H1Report r;
  r.dim = n;
  r.dim_ker_norm = n - rank(N);
  r.rank_sigma_minus_1 = rank(S - I);
  r.h1 = r.dim_ker_norm - r.rank_sigma_minus_1;
  r.hypothesis = S.pow(order / p) == I;
  r.norm_zero = N.is_zero();
  r.coinvariants = n - r.rank_sigma_minus_1;
  return r;
}

struct KernelAnnotation {
  bool in_kernel = false;
  std::optional<TowerElement> witness;  // D with P(C(s)) = (s - 1) D
};

/// For each candidate cocycle, whether P o C is a coboundary on the module
/// of degree < d_bound, with a witness when it is.
inline std::vector<KernelAnnotation> kernel_of_additive_map(const TowerAction& A, const AdditivePolynomial& P,
                                                            const std::vector<std::vector<TowerElement>>& candidates,
                                                            long d_bound) {
  const TowerRing& R = A.ring();
  const ModuleCoords Md(R, module_basis(R.shape(), d_bound));
  const LinearizedModule M = linearize(A, Md.basis());
  std::vector<KernelAnnotation> out;
  for (const auto& C : candidates) {
    const auto img = additive_apply_cocycle(R, P, C, d_bound);
    CocycleTable T;
    for (const auto& x : img) T.push_back(Md.coords(x));
    KernelAnnotation a;
    if (cocycle_check(M, T).ok) {
      if (auto b = coboundary_test(M, T)) {
        a.in_kernel = true;
        a.witness = Md.element(*b);
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace hkg

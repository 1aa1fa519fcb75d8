#pragma once

// Numerical semigroups and the bounded monomial modules spanned by products of
// tower generators.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hkg/error.hpp"

namespace hkg {

class NumericalSemigroup {
 public:
  /// Generators are sorted and deduplicated; they need not be coprime, but
  /// gap queries then fail with InfiniteGaps.
  NumericalSemigroup(std::uint32_t p, std::vector<long> gens) : p_(p), gens_(std::move(gens)) {
    require(!gens_.empty(), errc::invalid_argument, "empty generator list");
    for (long g : gens_) require(g > 0, errc::invalid_argument, "generators must be positive");
    std::sort(gens_.begin(), gens_.end());
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
    gcd_ = 0;
    for (long g : gens_) gcd_ = std::gcd(gcd_, g);
    build_apery();
  }

  std::uint32_t p() const { return p_; }
  const std::vector<long>& generators() const { return gens_; }
  long gcd() const { return gcd_; }

  bool contains(long x) const {
    if (x < 0) return false;
    const long w = apery_[static_cast<std::size_t>(x % gens_[0])];
    return w != kUnreachable && x >= w;
  }

  /// Exponents e with sum e_i g_i == x, or nothing if x is not in S.
  std::optional<std::vector<long>> witness(long x) const {
    if (!contains(x)) return std::nullopt;
    std::vector<long> e(gens_.size(), 0);
    long r = x % gens_[0];
    e[0] = (x - apery_[static_cast<std::size_t>(r)]) / gens_[0];
    while (r != 0) {
      const auto [prev, gi] = parent_[static_cast<std::size_t>(r)];
      ++e[static_cast<std::size_t>(gi)];
      r = prev;
    }
    return e;
  }

  /// Largest integer not in S (-1 for S = N).
  long frobenius() const {
    require(gcd_ == 1, errc::infinite_gaps, "generators have gcd " + std::to_string(gcd_));
    return *std::max_element(apery_.begin(), apery_.end()) - gens_[0];
  }

  std::vector<long> gaps() const {
    const long f = frobenius();
    std::vector<long> out;
    for (long x = 1; x <= f; ++x)
      if (!contains(x)) out.push_back(x);
    return out;
  }

  /// Elements of S below `bound`, increasing.
  std::vector<long> elements_below(long bound) const {
    std::vector<long> out;
    for (long x = 0; x < bound; ++x)
      if (contains(x)) out.push_back(x);
    return out;
  }

  /// The j-th element m_j of S in increasing order (m_0 = 0).
  long element(std::size_t j) const {
    long x = -1;
    for (std::size_t seen = 0;; ) {
      ++x;
      if (contains(x) && seen++ == j) return x;
    }
  }

  /// No generator lies in the semigroup spanned by the others.
  bool is_minimally_generated() const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      std::vector<long> others;
      for (std::size_t j = 0; j < gens_.size(); ++j)
        if (j != i) others.push_back(gens_[j]);
      if (!others.empty() && NumericalSemigroup(p_, others).contains(gens_[i])) return false;
    }
    return true;
  }

  std::vector<long> minimal_generators() const {
    std::vector<long> keep;
    for (long g : gens_) {
      if (keep.empty() || !NumericalSemigroup(p_, keep).contains(g)) keep.push_back(g);
    }
    return keep;
  }

  struct FirstTame {
    long m = 0;
    std::size_t r = 0;
    bool is_last_generator = false;
  };

  /// The least element of S prime to p, and its index in m_0 < m_1 < ...
  FirstTame first_prime_to_p() const {
    const bool any = std::any_of(gens_.begin(), gens_.end(), [&](long g) { return g % p_ != 0; });
    require(any, errc::no_tame_element, "every generator is divisible by p");
    FirstTame ft;
    for (long x = 0;; ++x) {
      if (!contains(x)) continue;
      if (x % p_ != 0) {
        ft.m = x;
        break;
      }
      ++ft.r;
    }
    const auto mins = minimal_generators();
    ft.is_last_generator = ft.m == mins.back();
    return ft;
  }

 private:
  static constexpr long kUnreachable = std::numeric_limits<long>::max();

  // Apery set with respect to the smallest generator, by Dijkstra on residues.
  void build_apery() {
    const long g0 = gens_[0];
    apery_.assign(static_cast<std::size_t>(g0), kUnreachable);
    parent_.assign(static_cast<std::size_t>(g0), {0, 0});
    using Item = std::pair<long, long>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    apery_[0] = 0;
    pq.push({0, 0});
    while (!pq.empty()) {
      const auto [d, r] = pq.top();
      pq.pop();
      if (d != apery_[static_cast<std::size_t>(r)]) continue;
      for (std::size_t i = 1; i < gens_.size(); ++i) {
        const long nr = (r + gens_[i]) % g0;
        const long nd = d + gens_[i];
        if (nd < apery_[static_cast<std::size_t>(nr)]) {
          apery_[static_cast<std::size_t>(nr)] = nd;
          parent_[static_cast<std::size_t>(nr)] = {r, static_cast<long>(i)};
          pq.push({nd, nr});
        }
      }
    }
  }

  std::uint32_t p_;
  std::vector<long> gens_;
  long gcd_ = 0;
  std::vector<long> apery_;
  std::vector<std::pair<long, long>> parent_;
};

/// Pole orders and exponent bounds of generators f_0, ..., f_s: exponent a_i
/// of f_i is bounded by p^{n_i} for i >= 1 and a_0 is free.
struct MonomialShape {
  std::uint32_t p = 0;
  std::vector<int> n;       // n_1 .. n_s
  std::vector<long> poles;  // m_0 .. m_s

  std::size_t size() const { return poles.size(); }

  long exponent_bound(std::size_t i) const {
    if (i == 0) return std::numeric_limits<long>::max();
    long b = 1;
    for (int j = 0; j < n[i - 1]; ++j) b *= p;
    return b;
  }

  long degree(const std::vector<int>& exps) const {
    long d = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) d += static_cast<long>(exps[i]) * poles[i];
    return d;
  }
};

struct Monomial {
  std::vector<int> exps;
  long degree = 0;
};

struct MonomialBasis {
  long bound = 0;
  int s = -1;  // largest index with pole < bound
  std::vector<Monomial> monomials;

  bool degrees_distinct() const {
    for (std::size_t i = 1; i < monomials.size(); ++i)
      if (monomials[i].degree == monomials[i - 1].degree) return false;
    return true;
  }

  /// Position of a monomial, or -1.
  long index_of(const std::vector<int>& exps) const {
    for (std::size_t i = 0; i < monomials.size(); ++i)
      if (monomials[i].exps == exps) return static_cast<long>(i);
    return -1;
  }
};

/// All monomials f_0^{a_0} ... f_s^{a_s} of degree < m with a_i < p^{n_i}
/// for i >= 1, sorted by degree (ties by exponent vector).
inline MonomialBasis module_basis(const MonomialShape& shape, long m) {
  require(shape.n.size() + 1 == shape.poles.size(), errc::invalid_argument, "shape needs s+1 poles and s ranks");
  for (long pole : shape.poles) require(pole > 0, errc::invalid_argument, "pole orders must be positive");
  MonomialBasis b;
  b.bound = m;
  for (std::size_t i = 0; i < shape.poles.size(); ++i)
    if (shape.poles[i] < m) b.s = static_cast<int>(i);
  std::vector<int> exps(shape.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, long deg) -> void {
    if (i == shape.size()) {
      b.monomials.push_back({exps, deg});
      return;
    }
    const long cap = shape.exponent_bound(i);
    for (long a = 0; a < cap && deg + a * shape.poles[i] < m; ++a) {
      exps[i] = static_cast<int>(a);
      self(self, i + 1, deg + a * shape.poles[i]);
    }
    exps[i] = 0;
  };
  if (m > 0) rec(rec, 0, 0);
  std::sort(b.monomials.begin(), b.monomials.end(), [](const Monomial& x, const Monomial& y) {
    return x.degree != y.degree ? x.degree < y.degree : x.exps < y.exps;
  });
  return b;
}

}  // namespace hkg

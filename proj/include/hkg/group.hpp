#pragma once

// Small finite groups as explicit multiplication tables. Element 0 is the
// identity; `generators` are the distinguished generators that cocycles are
// specified on.

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hkg/error.hpp"

namespace hkg {

class FiniteGroup {
 public:
  enum class Kind { cyclic, elem_abelian, table };

  FiniteGroup() = default;

  /// Z/n with element i = sigma^i.
  static FiniteGroup cyclic(std::size_t n) {
    require(n >= 1, errc::invalid_argument, "group order must be positive");
    std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
    FiniteGroup g(std::move(mul), n > 1 ? std::vector<std::size_t>{1} : std::vector<std::size_t>{});
    g.kind_ = Kind::cyclic;
    return g;
  }

  /// (Z/p)^r; element index is the base-p digit vector, generators are p^j.
  static FiniteGroup elem_abelian(std::uint32_t p, int r) {
    require(r >= 0, errc::invalid_argument, "rank must be nonnegative");
    std::size_t n = 1;
    for (int i = 0; i < r; ++i) n *= p;
    std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t x = a, y = b, out = 0, pw = 1;
        for (int i = 0; i < r; ++i, pw *= p, x /= p, y /= p) out += ((x % p + y % p) % p) * pw;
        mul[a][b] = out;
      }
    std::vector<std::size_t> gens;
    for (std::size_t i = 0, pw = 1; i < static_cast<std::size_t>(r); ++i, pw *= p) gens.push_back(pw);
    FiniteGroup g(std::move(mul), std::move(gens));
    g.kind_ = Kind::elem_abelian;
    return g;
  }

  /// General table; validated for identity at 0, associativity, inverses, and
  /// generation by `gens`.
  static FiniteGroup from_table(std::vector<std::vector<std::size_t>> mul, std::vector<std::size_t> gens) {
    FiniteGroup g(std::move(mul), std::move(gens), true);
    g.kind_ = Kind::table;
    return g;
  }

  Kind kind() const { return kind_; }
  std::size_t order() const { return mul_.size(); }
  const std::vector<std::size_t>& generators() const { return gens_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inv_[a]; }
  const std::vector<std::vector<std::size_t>>& table() const { return mul_; }

  std::size_t power(std::size_t a, std::uint64_t e) const {
    std::size_t r = 0;
    for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  std::size_t element_order(std::size_t a) const {
    std::size_t n = 1;
    for (std::size_t x = a; x != 0; x = mul(x, a)) ++n;
    return n;
  }

  /// Some element generating the whole group, if cyclic.
  std::optional<std::size_t> cyclic_generator() const {
    for (std::size_t a = 0; a < order(); ++a)
      if (element_order(a) == order()) return a;
    return std::nullopt;
  }

  /// Breadth-first spanning tree from the identity over right multiplication
  /// by generators: element = tree_parent * generator.
  struct TreeEdge {
    std::size_t parent = 0;
    std::size_t gen = 0;  // index into generators()
  };
  const std::vector<TreeEdge>& tree() const { return tree_; }
  /// Elements in breadth-first order (identity first).
  const std::vector<std::size_t>& bfs_order() const { return bfs_; }

  /// Minimal generating set of a subgroup, chosen greedily in element order.
  std::vector<std::size_t> greedy_generators(const std::vector<std::size_t>& subgroup) const {
    std::vector<std::size_t> gens;
    std::vector<bool> in_span(order(), false);
    in_span[0] = true;
    for (std::size_t x : subgroup) {
      if (in_span[x]) continue;
      gens.push_back(x);
      // Closure of the span under the new generator.
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t y = 0; y < order(); ++y) {
          if (!in_span[y]) continue;
          for (std::size_t g : gens) {
            const std::size_t z = mul(y, g);
            if (!in_span[z]) {
              in_span[z] = true;
              grew = true;
            }
          }
        }
      }
    }
    return gens;
  }

 private:
  FiniteGroup(std::vector<std::vector<std::size_t>> mul, std::vector<std::size_t> gens, bool check_assoc = false)
      : mul_(std::move(mul)), gens_(std::move(gens)) {
    validate(check_assoc);
  }

  void validate(bool check_assoc) {
    const std::size_t n = mul_.size();
    require(n >= 1, errc::not_a_group, "empty group");
    for (const auto& row : mul_) {
      require(row.size() == n, errc::not_a_group, "multiplication table is not square");
      for (auto x : row) require(x < n, errc::not_a_group, "table entry out of range");
    }
    for (std::size_t a = 0; a < n; ++a)
      require(mul_[0][a] == a && mul_[a][0] == a, errc::not_a_group, "element 0 is not the identity");
    for (std::size_t a = 0; a < n && check_assoc; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          require(mul_[mul_[a][b]][c] == mul_[a][mul_[b][c]], errc::not_a_group, "table is not associative");
    inv_.assign(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (mul_[a][b] == 0) inv_[a] = b;
    for (std::size_t a = 0; a < n; ++a) require(inv_[a] < n, errc::not_a_group, "element without inverse");
    for (auto g : gens_) require(g < n, errc::not_a_group, "generator out of range");
    tree_.assign(n, {});
    std::vector<bool> seen(n, false);
    seen[0] = true;
    bfs_ = {0};
    for (std::size_t head = 0; head < bfs_.size(); ++head) {
      const std::size_t x = bfs_[head];
      for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        const std::size_t y = mul_[x][gens_[gi]];
        if (seen[y]) continue;
        seen[y] = true;
        tree_[y] = {x, gi};
        bfs_.push_back(y);
      }
    }
    require(bfs_.size() == n, errc::not_a_group, "generators do not generate the group");
  }

  Kind kind_ = Kind::table;
  std::vector<std::vector<std::size_t>> mul_;
  std::vector<std::size_t> gens_;
  std::vector<std::size_t> inv_;
  std::vector<TreeEdge> tree_;
  std::vector<std::size_t> bfs_;
};

}  // namespace hkg

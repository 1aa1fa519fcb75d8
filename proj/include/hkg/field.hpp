#pragma once

// Finite fields F_q, q = p^k, in the polynomial basis over F_p.
//
// Elements are stored as a single index v = c_0 + c_1 p + ... + c_{k-1} p^{k-1}
// where (c_0, ..., c_{k-1}) are the coordinates with respect to 1, X, ..., X^{k-1}
// modulo the canonical modulus. Multiplication goes through discrete log tables,
// so every arithmetic operation is O(1) (addition is O(k) for large q).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hkg/error.hpp"

namespace hkg {

struct Fq {
  std::uint32_t v = 0;
  friend bool operator==(Fq, Fq) = default;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is small.
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

namespace detail {

using Poly = std::vector<std::uint32_t>;  // low degree first, over F_p

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  poly_trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod_prime(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t f = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - f * m[i] % p) % p);
    poly_trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
  return poly_mod(std::move(r), m, p);
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: f of degree k is irreducible iff gcd(X^{p^i} - X, f) = 1 for i <= k/2.
inline bool poly_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t k = f.size() - 1;
  if (k == 1) return true;
  if (f[0] == 0) return false;
  Poly xp = {0, 1};
  for (std::size_t i = 1; i <= k / 2; ++i) {
    Poly acc = {1};
    Poly base = xp;
    for (std::uint32_t e = p; e; e >>= 1) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    xp = acc;
    Poly d = xp;
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    Poly g = poly_gcd(f, d, p);
    if (g.size() > 1) return false;
  }
  return true;
}

struct FieldData {
  std::uint32_t p = 0, k = 0, q = 0;
  Poly modulus;
  std::vector<std::uint32_t> pow_p;     // p^0 .. p^k
  std::vector<std::uint32_t> exp_table; // g^i, i in [0, 2(q-1))
  std::vector<std::int32_t> log_table;  // log_g(v), -1 for 0
  std::vector<std::uint16_t> add_table; // q*q, only for small extension fields
  std::vector<std::uint32_t> lex_order; // elements sorted by coordinate vector, c_0 first
  std::vector<std::uint32_t> lex_rank;
  std::uint32_t generator = 1;

  std::uint32_t digit(std::uint32_t v, std::uint32_t i) const { return (v / pow_p[i]) % p; }

  std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
      const std::uint32_t s = (a % p + b % p) % p;
      r += s * pow_p[i];
      a /= p;
      b /= p;
    }
    return r;
  }

  Poly to_poly(std::uint32_t v) const {
    Poly r(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      r[i] = v % p;
      v /= p;
    }
    return r;
  }

  std::uint32_t from_poly(const Poly& a) const {
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < a.size() && i < k; ++i) r += a[i] * pow_p[i];
    return r;
  }
};

inline Poly canonical_modulus(std::uint32_t p, std::uint32_t k) {
  // Monic degree-k polynomials enumerated lexicographically with c_0 most
  // significant; the first irreducible one wins.
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < k; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(k + 1, 0);
    f[k] = 1;
    std::uint64_t t = idx;
    for (std::uint32_t i = k; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    if (poly_irreducible(f, p)) return f;
  }
  fail(errc::invalid_field, "no irreducible polynomial found");
}

inline std::shared_ptr<const FieldData> build_field(std::uint32_t p, std::uint32_t k) {
  auto d = std::make_shared<FieldData>();
  d->p = p;
  d->k = k;
  d->pow_p.resize(k + 1);
  d->pow_p[0] = 1;
  for (std::uint32_t i = 1; i <= k; ++i) d->pow_p[i] = d->pow_p[i - 1] * p;
  d->q = d->pow_p[k];
  d->modulus = canonical_modulus(p, k);
  const std::uint32_t q = d->q;

  d->lex_order.resize(q);
  for (std::uint32_t i = 0; i < q; ++i) {
    // i enumerates coordinate vectors with c_0 most significant.
    std::uint32_t t = i, v = 0;
    for (std::uint32_t j = k; j-- > 0;) {
      v += (t % p) * d->pow_p[j];
      t /= p;
    }
    d->lex_order[i] = v;
  }
  d->lex_rank.resize(q);
  for (std::uint32_t i = 0; i < q; ++i) d->lex_rank[d->lex_order[i]] = i;

  auto mul_slow = [&](std::uint32_t a, std::uint32_t b) {
    return d->from_poly(poly_mulmod(d->to_poly(a), d->to_poly(b), d->modulus, p));
  };
  std::vector<std::uint32_t> prime_factors;
  {
    std::uint32_t n = q - 1;
    for (std::uint32_t f = 2; f * f <= n; ++f)
      if (n % f == 0) {
        prime_factors.push_back(f);
        while (n % f == 0) n /= f;
      }
    if (n > 1) prime_factors.push_back(n);
  }
  auto pow_slow = [&](std::uint32_t a, std::uint64_t e) {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = mul_slow(r, a);
      a = mul_slow(a, a);
      e >>= 1;
    }
    return r;
  };
  std::uint32_t g = 0;
  for (std::uint32_t i = 0; i < q && g == 0; ++i) {
    const std::uint32_t cand = d->lex_order[i];
    if (cand == 0) continue;
    bool ok = true;
    for (std::uint32_t f : prime_factors)
      if (pow_slow(cand, (q - 1) / f) == 1) {
        ok = false;
        break;
      }
    if (ok) g = cand;
  }
  require(g != 0, errc::invalid_field, "no primitive element");
  d->generator = g;
  d->exp_table.resize(2 * (q - 1));
  d->log_table.assign(q, -1);
  std::uint32_t cur = 1;
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    d->exp_table[i] = cur;
    d->exp_table[i + q - 1] = cur;
    d->log_table[cur] = static_cast<std::int32_t>(i);
    cur = (k == 1) ? static_cast<std::uint32_t>(static_cast<std::uint64_t>(cur) * g % p) : mul_slow(cur, g);
  }
  if (k > 1 && q <= 1024) {
    d->add_table.resize(static_cast<std::size_t>(q) * q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b)
        d->add_table[static_cast<std::size_t>(a) * q + b] = static_cast<std::uint16_t>(d->add_digits(a, b));
  }
  return d;
}

}  // namespace detail

/// The finite field F_{p^k} with its canonical modulus (the lexicographically
/// smallest monic irreducible, coefficients compared low degree first).
/// Two Field values with the same (p, k) always describe the same field.
class Field {
 public:
  Field() = default;

  static Field make(std::uint32_t p, std::uint32_t k = 1) {
    require(is_prime(p), errc::invalid_field, std::to_string(p) + " is not prime");
    require(p >= 5, errc::invalid_field, "characteristic must be at least 5");
    require(k >= 1, errc::invalid_field, "extension degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      q *= p;
      require(q <= (1u << 22), errc::invalid_field, "field too large");
    }
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const detail::FieldData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, k}];
    if (!slot) slot = detail::build_field(p, k);
    Field f;
    f.d_ = slot;
    return f;
  }

  bool valid() const { return static_cast<bool>(d_); }
  std::uint32_t p() const { return d_->p; }
  std::uint32_t k() const { return d_->k; }
  std::uint32_t q() const { return d_->q; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }

  friend bool operator==(const Field& a, const Field& b) {
    if (a.d_ == b.d_) return true;
    if (!a.d_ || !b.d_) return false;
    return a.p() == b.p() && a.k() == b.k();
  }

  Fq zero() const { return {0}; }
  Fq one() const { return {1}; }

  Fq from_int(std::int64_t n) const { return {static_cast<std::uint32_t>(mod_floor(n, d_->p))}; }

  Fq from_coeffs(std::span<const std::uint32_t> c) const {
    require(c.size() == d_->k, errc::invalid_argument,
            "field element needs exactly " + std::to_string(d_->k) + " coordinates");
    std::uint32_t v = 0;
    for (std::uint32_t i = 0; i < d_->k; ++i) {
      require(c[i] < d_->p, errc::invalid_argument, "coordinate out of range");
      v += c[i] * d_->pow_p[i];
    }
    return {v};
  }

  Fq from_index(std::uint32_t v) const {
    require(v < d_->q, errc::invalid_argument, "element index out of range");
    return {v};
  }

  std::vector<std::uint32_t> coeffs(Fq a) const { return d_->to_poly(a.v); }
  std::uint32_t coeff(Fq a, std::uint32_t i) const { return d_->digit(a.v, i); }

  /// X^i in the polynomial basis; {basis_element(i)} is an F_p-basis of F_q.
  Fq basis_element(std::uint32_t i) const { return {d_->pow_p[i]}; }
  Fq generator() const { return {d_->generator}; }

  Fq add(Fq a, Fq b) const {
    if (d_->k == 1) {
      const std::uint32_t s = a.v + b.v;
      return {s >= d_->p ? s - d_->p : s};
    }
    if (!d_->add_table.empty()) return {d_->add_table[static_cast<std::size_t>(a.v) * d_->q + b.v]};
    return {d_->add_digits(a.v, b.v)};
  }
  Fq neg(Fq a) const {
    if (d_->k == 1) return {a.v == 0 ? 0 : d_->p - a.v};
    std::uint32_t r = 0, v = a.v;
    for (std::uint32_t i = 0; i < d_->k; ++i) {
      const std::uint32_t c = v % d_->p;
      r += ((d_->p - c) % d_->p) * d_->pow_p[i];
      v /= d_->p;
    }
    return {r};
  }
  Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }

  Fq mul(Fq a, Fq b) const {
    if (a.v == 0 || b.v == 0) return {0};
    if (d_->k == 1) return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v) * b.v % d_->p)};
    return {d_->exp_table[d_->log_table[a.v] + d_->log_table[b.v]]};
  }
  Fq scale(Fq a, std::int64_t n) const { return mul(a, from_int(n)); }

  Fq inv(Fq a) const {
    require(a.v != 0, errc::div_by_zero, "inverse of zero");
    if (d_->k == 1) return {inv_mod_prime(a.v, d_->p)};
    const std::int32_t l = d_->log_table[a.v];
    return {d_->exp_table[(d_->q - 1 - l) % (d_->q - 1)]};
  }
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }

  Fq pow(Fq a, std::int64_t e) const {
    if (e < 0) return pow(inv(a), -e);
    if (e == 0) return one();
    if (a.v == 0) return zero();
    const std::uint64_t l = static_cast<std::uint64_t>(d_->log_table[a.v]);
    const std::uint64_t r = (l * (static_cast<std::uint64_t>(e) % (d_->q - 1))) % (d_->q - 1);
    return {d_->exp_table[r]};
  }
  Fq frobenius(Fq a) const { return pow(a, d_->p); }

  /// Total order used for canonical choices: coordinate vectors compared
  /// lexicographically, c_0 first.
  bool lex_less(Fq a, Fq b) const { return d_->lex_rank[a.v] < d_->lex_rank[b.v]; }
  const std::vector<std::uint32_t>& lex_order() const { return d_->lex_order; }

  /// The canonical n-th root of a: 1 when a == 1, otherwise the smallest root
  /// in lex order. Empty when a has no n-th root in F_q.
  std::optional<Fq> nth_root(Fq a, std::uint64_t n) const {
    require(n >= 1, errc::invalid_argument, "root index must be positive");
    if (a.v == 0) return zero();
    if (a == one()) return one();
    const std::uint64_t qm1 = d_->q - 1;
    const std::uint64_t g = std::gcd(n % qm1 == 0 ? qm1 : n % qm1, qm1);
    if (static_cast<std::uint64_t>(d_->log_table[a.v]) % g != 0) return std::nullopt;
    for (std::uint32_t v : d_->lex_order) {
      if (v == 0) continue;
      if (pow(Fq{v}, static_cast<std::int64_t>(n % qm1 + qm1)) == a) return Fq{v};
    }
    return std::nullopt;
  }

 private:
  std::shared_ptr<const detail::FieldData> d_;
};

}  // namespace hkg

#pragma once

// Truncated Laurent series over F_q with explicit valuation and precision.
//
// A LaurentSeries stores the coefficients of t^v, ..., t^{N-1}: the series is
// known modulo t^N. Every operation returns the largest precision that its
// inputs provably support, so an under-precise value can never masquerade as
// an exact one.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hkg/error.hpp"
#include "hkg/field.hpp"

namespace hkg {

namespace detail {

// c[n] = sum_{i+j=n} a[i] b[j] for n < out_len.
inline std::vector<Fq> convolve(const Field& F, std::span<const Fq> a, std::span<const Fq> b,
                                std::size_t out_len) {
  std::vector<Fq> out(out_len);
  if (out_len == 0 || a.empty() || b.empty()) return out;
  const std::uint32_t p = F.p();
  const std::uint32_t k = F.k();
  const std::size_t la = std::min(a.size(), out_len);
  const std::size_t lb = std::min(b.size(), out_len);
  if (k == 1) {
    std::vector<std::uint64_t> acc(out_len, 0);
    for (std::size_t i = 0; i < la; ++i) {
      const std::uint64_t ai = a[i].v;
      if (ai == 0) continue;
      const std::size_t lim = std::min(lb, out_len - i);
      std::uint64_t* dst = acc.data() + i;
      for (std::size_t j = 0; j < lim; ++j) dst[j] += ai * b[j].v;
      if ((i & 1023) == 1023)
        for (auto& x : acc) x %= p;
    }
    for (std::size_t n = 0; n < out_len; ++n) out[n] = Fq{static_cast<std::uint32_t>(acc[n] % p)};
    return out;
  }
  // Extension fields: accumulate unreduced polynomial products, reduce once.
  const std::size_t lanes = 2 * k - 1;
  std::vector<std::uint32_t> da(la * k), db(lb * k);
  for (std::size_t i = 0; i < la; ++i)
    for (std::uint32_t d = 0, v = a[i].v; d < k; ++d, v /= p) da[i * k + d] = v % p;
  for (std::size_t j = 0; j < lb; ++j)
    for (std::uint32_t d = 0, v = b[j].v; d < k; ++d, v /= p) db[j * k + d] = v % p;
  std::vector<std::uint64_t> acc(out_len * lanes, 0);
  std::size_t since_reduce = 0;
  for (std::size_t i = 0; i < la; ++i) {
    if (a[i].v == 0) continue;
    const std::uint32_t* ai = da.data() + i * k;
    const std::size_t lim = std::min(lb, out_len - i);
    for (std::size_t j = 0; j < lim; ++j) {
      if (b[j].v == 0) continue;
      const std::uint32_t* bj = db.data() + j * k;
      std::uint64_t* dst = acc.data() + (i + j) * lanes;
      for (std::uint32_t x = 0; x < k; ++x) {
        if (ai[x] == 0) continue;
        for (std::uint32_t y = 0; y < k; ++y) dst[x + y] += static_cast<std::uint64_t>(ai[x]) * bj[y];
      }
    }
    if (++since_reduce == 4096) {
      for (auto& x : acc) x %= p;
      since_reduce = 0;
    }
  }
  const auto& mod = F.modulus();
  std::vector<std::uint64_t> tmp(lanes);
  for (std::size_t n = 0; n < out_len; ++n) {
    for (std::size_t l = 0; l < lanes; ++l) tmp[l] = acc[n * lanes + l] % p;
    for (std::size_t d = lanes; d-- > k;) {
      const std::uint64_t c = tmp[d];
      if (c == 0) continue;
      tmp[d] = 0;
      for (std::uint32_t j = 0; j < k; ++j) tmp[d - k + j] = (tmp[d - k + j] + c * (p - mod[j])) % p;
    }
    std::uint32_t v = 0, pw = 1;
    for (std::uint32_t d = 0; d < k; ++d, pw *= p) v += static_cast<std::uint32_t>(tmp[d]) * pw;
    out[n] = Fq{v};
  }
  return out;
}

}  // namespace detail

class LaurentSeries {
 public:
  LaurentSeries() = default;

  /// The zero series, known modulo t^prec.
  static LaurentSeries zero(const Field& F, int prec) {
    LaurentSeries s;
    s.field_ = F;
    s.val_ = prec;
    s.prec_ = prec;
    return s;
  }

  /// c t^e + O(t^prec).
  static LaurentSeries monomial(const Field& F, Fq c, int e, int prec) {
    require(e < prec || c == F.zero(), errc::invalid_argument, "monomial beyond precision");
    std::vector<Fq> v;
    if (c != F.zero()) v.push_back(c);
    return from_coeffs(F, e, std::move(v), prec);
  }

  static LaurentSeries constant(const Field& F, Fq c, int prec) { return monomial(F, c, 0, prec); }

  /// The uniformizer t + O(t^prec).
  static LaurentSeries variable(const Field& F, int prec) { return monomial(F, F.one(), 1, prec); }

  /// Coefficients c[i] of t^{start+i}; positions up to prec not covered are zero.
  static LaurentSeries from_coeffs(const Field& F, int start, std::vector<Fq> c, int prec) {
    require(start + static_cast<long>(c.size()) <= prec, errc::invalid_argument,
            "coefficients extend beyond the precision");
    LaurentSeries s;
    s.field_ = F;
    s.prec_ = prec;
    s.val_ = start;
    c.resize(static_cast<std::size_t>(prec - start), F.zero());
    s.c_ = std::move(c);
    s.normalize();
    return s;
  }

  const Field& field() const { return field_; }
  bool is_zero() const { return c_.empty(); }
  /// Valuation; the zero series reports its precision.
  int valuation() const { return val_; }
  int precision() const { return prec_; }
  /// Number of known coefficients from the valuation on.
  int relative_precision() const { return prec_ - val_; }

  Fq coeff(int e) const {
    require(e < prec_, errc::insufficient_precision, "coefficient of t^" + std::to_string(e) + " not known");
    if (e < val_) return field_.zero();
    return c_[static_cast<std::size_t>(e - val_)];
  }
  Fq leading() const {
    require(!is_zero(), errc::invalid_argument, "zero series has no leading coefficient");
    return c_.front();
  }
  std::span<const Fq> coeffs() const { return c_; }

  LaurentSeries truncated(int prec) const {
    if (prec >= prec_) return *this;
    if (prec <= val_) return zero(field_, prec);
    LaurentSeries s = *this;
    s.prec_ = prec;
    s.c_.resize(static_cast<std::size_t>(prec - val_));
    return s;
  }

  /// Multiplication by t^s.
  LaurentSeries shifted(int s) const {
    LaurentSeries r = *this;
    r.val_ += s;
    r.prec_ += s;
    return r;
  }

  LaurentSeries scaled(Fq c) const {
    if (c == field_.zero()) return zero(field_, prec_);
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = field_.mul(x, c);
    return r;
  }

  LaurentSeries operator-() const {
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = field_.neg(x);
    return r;
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add_impl(a, b, false); }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return add_impl(a, b, true); }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    check_same_field(a, b);
    const int prec = std::min(a.val_ + b.prec_, b.val_ + a.prec_);
    const int val = a.val_ + b.val_;
    if (a.is_zero() || b.is_zero()) return zero(a.field_, prec);
    auto c = detail::convolve(a.field_, a.c_, b.c_, static_cast<std::size_t>(prec - val));
    return from_coeffs(a.field_, val, std::move(c), prec);
  }

  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
    check_same_field(a, b);
    return a * b.inverse();
  }

  /// 1/a; the relative precision is preserved.
  LaurentSeries inverse() const {
    require(!is_zero(), errc::div_by_zero, "division by the zero series");
    const std::size_t r = c_.size();
    std::vector<Fq> inv(r, field_.zero());
    const Fq i0 = field_.inv(c_[0]);
    inv[0] = i0;
    for (std::size_t n = 1; n < r; ++n) {
      Fq s = field_.zero();
      for (std::size_t j = 1; j <= n; ++j) {
        if (c_[j] == field_.zero()) continue;
        s = field_.add(s, field_.mul(c_[j], inv[n - j]));
      }
      inv[n] = field_.neg(field_.mul(i0, s));
    }
    return from_coeffs(field_, -val_, std::move(inv), -val_ + static_cast<int>(r));
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.field_ == b.field_ && a.val_ == b.val_ && a.prec_ == b.prec_ && a.c_ == b.c_;
  }

 private:
  static void check_same_field(const LaurentSeries& a, const LaurentSeries& b) {
    require(a.field_ == b.field_, errc::field_mismatch, "series over different fields");
  }

  static LaurentSeries add_impl(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
    check_same_field(a, b);
    const int prec = std::min(a.prec_, b.prec_);
    const int start = std::min(std::min(a.val_, b.val_), prec);
    std::vector<Fq> c(static_cast<std::size_t>(prec - start), a.field_.zero());
    for (int e = a.val_; e < prec; ++e) c[e - start] = a.c_[e - a.val_];
    for (int e = b.val_; e < prec; ++e) {
      const Fq x = b.c_[e - b.val_];
      c[e - start] = subtract ? a.field_.sub(c[e - start], x) : a.field_.add(c[e - start], x);
    }
    return from_coeffs(a.field_, start, std::move(c), prec);
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == field_.zero()) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      val_ = prec_;
      return;
    }
    if (lead > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
      val_ += static_cast<int>(lead);
    }
  }

  Field field_;
  int val_ = 0;
  int prec_ = 0;
  std::vector<Fq> c_;
};

/// a and b agree modulo t^{min precision}.
inline bool agree(const LaurentSeries& a, const LaurentSeries& b) { return (a - b).is_zero(); }

/// f^e for e >= 0 (negative e goes through the inverse).
inline LaurentSeries pow_int(const LaurentSeries& f, long e) {
  if (e < 0) return pow_int(f.inverse(), -e);
  const int rel = f.is_zero() ? 0 : f.relative_precision();
  if (e == 0) return LaurentSeries::constant(f.field(), f.field().one(), std::max(rel, 1));
  LaurentSeries result;
  bool have = false;
  LaurentSeries base = f;
  while (e) {
    if (e & 1) {
      result = have ? result * base : base;
      have = true;
    }
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

namespace detail {

// f(g) for val(g) = w >= 1, Horner over the nonzero coefficients of f with
// cached gap powers of g (and of 1/g for the polar part).
inline LaurentSeries compose_impl(const LaurentSeries& f, const LaurentSeries& g) {
  const Field& F = f.field();
  const int w = g.valuation();
  const int rg = g.relative_precision();
  if (f.is_zero()) return LaurentSeries::zero(F, w * f.precision());
  const int vf = f.valuation();
  const long target_l = std::min<long>(static_cast<long>(w) * f.precision(), static_cast<long>(w) * vf + rg);
  const int T = static_cast<int>(target_l);

  std::vector<std::pair<int, Fq>> pos, neg;
  for (int e = vf; e < f.precision(); ++e) {
    const Fq c = f.coeff(e);
    if (c == F.zero()) continue;
    if (static_cast<long>(w) * e >= target_l) continue;  // lands past the target
    (e >= 0 ? pos : neg).push_back({e, c});
  }

  LaurentSeries result = LaurentSeries::zero(F, T);

  auto horner = [&](const LaurentSeries& base, int base_val, std::vector<std::pair<int, Fq>> terms) {
    // terms: (exponent j >= 0 of base, coefficient), evaluated as sum c_j base^j.
    std::sort(terms.begin(), terms.end(), [](auto& x, auto& y) { return x.first > y.first; });
    std::map<int, LaurentSeries> cache;
    auto power = [&](int d) -> const LaurentSeries& {
      auto it = cache.find(d);
      if (it != cache.end()) return it->second;
      LaurentSeries r = pow_int(base, d);
      return cache.emplace(d, r.truncated(T + std::max(0, -base_val) * d + 1)).first->second;
    };
    // acc at stage j is later multiplied by base^j, of valuation base_val*j.
    auto need = [&](int j) { return T - base_val * j; };
    int cur = terms.front().first;
    LaurentSeries acc = LaurentSeries::constant(F, terms.front().second, need(cur));
    for (std::size_t t = 1; t < terms.size(); ++t) {
      const int nxt = terms[t].first;
      acc = (acc.truncated(need(cur)) * power(cur - nxt)).truncated(need(nxt));
      acc = acc + LaurentSeries::constant(F, terms[t].second, need(nxt));
      cur = nxt;
    }
    if (cur > 0) acc = acc.truncated(need(cur)) * power(cur);
    return acc.truncated(T);
  };

  if (!pos.empty()) result = result + horner(g, w, pos);
  if (!neg.empty()) {
    for (auto& [e, c] : neg) e = -e;
    result = result + horner(g.inverse(), -w, neg);
  }
  return result.truncated(T);
}

}  // namespace detail

/// (f o g)(t) = f(g(t)); g must have positive valuation.
inline LaurentSeries compose(const LaurentSeries& f, const LaurentSeries& g) {
  require(f.field() == g.field(), errc::field_mismatch, "series over different fields");
  require(!g.is_zero() && g.valuation() >= 1, errc::illegal_substitution,
          "substituted series must have positive valuation");
  return detail::compose_impl(f, g);
}

/// Compositional inverse of a normalized series t + a_2 t^2 + ...
///
/// Coefficients are solved one at a time: with g = t + b_2 t^2 + ..., the
/// coefficient of t^n in f(g) is b_n plus terms in b_2..b_{n-1}, so no
/// division by integers occurs.
inline LaurentSeries reversion(const LaurentSeries& f) {
  require(!f.is_zero() && f.valuation() == 1 && f.leading() == f.field().one(), errc::not_normalized,
          "reversion needs a series t + a_2 t^2 + ...");
  const Field& F = f.field();
  const int N = f.precision();
  // pw[i][n] = [t^n] g^i, stored for n >= i.
  std::vector<std::vector<Fq>> pw(static_cast<std::size_t>(N));
  std::vector<Fq> b(static_cast<std::size_t>(N), F.zero());
  if (N > 1) b[1] = F.one();
  for (int i = 1; i < N; ++i) {
    pw[i].assign(static_cast<std::size_t>(N), F.zero());
    pw[i][i] = F.one();
  }
  for (int n = 2; n < N; ++n) {
    Fq s = F.zero();
    for (int i = 2; i <= n; ++i) {
      Fq acc = F.zero();
      for (int j = 1; j <= n - i + 1; ++j) {
        if (b[j] == F.zero()) continue;
        const Fq y = pw[i - 1][n - j];
        if (y == F.zero()) continue;
        acc = F.add(acc, F.mul(b[j], y));
      }
      if (i < n) pw[i][n] = acc;
      const Fq ai = f.coeff(i);
      if (ai != F.zero()) s = F.add(s, F.mul(ai, acc));
    }
    b[n] = F.neg(s);
    pw[1][n] = b[n];
  }
  return LaurentSeries::from_coeffs(F, 0, std::move(b), N);
}

/// The unique h with h^den = f^num whose leading coefficient is the canonical
/// den-th root of the leading coefficient of f^num.
///
/// The unit part is found by triangular recursion on h^den = u^num: the
/// coefficient of t^n in h^den is den*h_n plus a known polynomial in
/// h_1..h_{n-1}, and den is a unit mod p.
inline LaurentSeries pow_frac(const LaurentSeries& f, long num, long den) {
  require(den != 0, errc::invalid_argument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Field& F = f.field();
  require(den % static_cast<long>(F.p()) != 0, errc::wild_root, "root of order divisible by p");
  if (f.is_zero()) {
    require(num >= 0, errc::div_by_zero, "negative power of the zero series");
    if (num == 0) return LaurentSeries::constant(F, F.one(), 1);
    const long prec = (static_cast<long>(f.precision()) * num + den - 1) / den;
    return LaurentSeries::zero(F, static_cast<int>(prec));
  }
  const long v = f.valuation();
  require((v * num) % den == 0, errc::fractional_valuation,
          "valuation " + std::to_string(v) + " times " + std::to_string(num) + " is not divisible by " +
              std::to_string(den));
  const int r = f.relative_precision();
  const Fq lead_pow = F.pow(f.leading(), num);
  const auto root = F.nth_root(lead_pow, static_cast<std::uint64_t>(den));
  require(root.has_value(), errc::root_not_in_field, "leading coefficient has no root in F_q");
  if (num == 0) return LaurentSeries::constant(F, F.one(), r);

  // u = f / (lead t^v), a unit with constant term 1.
  const LaurentSeries u = f.shifted(static_cast<int>(-v)).scaled(F.inv(f.leading()));
  const LaurentSeries G = pow_int(u, num).truncated(r);

  const auto D = static_cast<std::size_t>(den);
  std::vector<Fq> h(static_cast<std::size_t>(r), F.zero());
  h[0] = F.one();
  // pw[j][n] = [t^n] h^j for j = 1..den-1.
  std::vector<std::vector<Fq>> pw(D);
  for (std::size_t j = 1; j < D; ++j) {
    pw[j].assign(static_cast<std::size_t>(r), F.zero());
    pw[j][0] = F.one();
  }
  const Fq den_inv = F.inv(F.from_int(den));
  std::vector<Fq> known(D + 1, F.zero());
  for (int n = 1; n < r; ++n) {
    // known[j] = [t^n] h^j minus its j*h_n part.
    known[1] = F.zero();
    for (std::size_t j = 2; j <= D; ++j) {
      Fq mid = F.zero();
      const auto& prev = pw[j - 1];
      for (int i = 1; i < n; ++i) {
        if (h[i] == F.zero()) continue;
        const Fq y = prev[n - i];
        if (y == F.zero()) continue;
        mid = F.add(mid, F.mul(h[i], y));
      }
      known[j] = F.add(known[j - 1], mid);
    }
    h[n] = F.mul(F.sub(G.coeff(n), known[D]), den_inv);
    for (std::size_t j = 1; j < D; ++j)
      pw[j][n] = F.add(F.scale(h[n], static_cast<std::int64_t>(j)), known[j]);
  }
  const int out_val = static_cast<int>(v * num / den);
  for (auto& x : h) x = F.mul(x, *root);
  return LaurentSeries::from_coeffs(F, out_val, std::move(h), out_val + r);
}

}  // namespace hkg

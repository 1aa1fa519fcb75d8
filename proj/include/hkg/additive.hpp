#pragma once

// Additive polynomials P(X) = sum_i a_i X^{p^i} over F_q, built either as the
// product over an F_p-span or from a Moore determinant.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hkg/error.hpp"
#include "hkg/field.hpp"
#include "hkg/series.hpp"

namespace hkg {

class AdditivePolynomial {
 public:
  AdditivePolynomial() = default;
  /// coeffs[i] is the coefficient of X^{p^i}.
  AdditivePolynomial(Field F, std::vector<Fq> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) {
    require(!c_.empty(), errc::invalid_argument, "additive polynomial needs at least one coefficient");
  }

  const Field& field() const { return F_; }
  std::uint32_t p() const { return F_.p(); }
  int n() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Fq>& coeffs() const { return c_; }
  bool is_monic() const { return c_.back() == F_.one(); }

  friend bool operator==(const AdditivePolynomial& a, const AdditivePolynomial& b) {
    return a.F_ == b.F_ && a.c_ == b.c_;
  }

  /// lambda^{p^n} P(X / lambda): the polynomial whose roots are lambda times ours.
  AdditivePolynomial rescaled(Fq lambda) const {
    require(lambda != F_.zero(), errc::invalid_argument, "zero scale");
    std::vector<Fq> c = c_;
    std::int64_t pn = 1;
    for (int i = 0; i < n(); ++i) pn *= F_.p();
    std::int64_t pi = 1;
    for (int i = 0; i <= n(); ++i, pi *= F_.p()) c[i] = F_.mul(c[i], F_.pow(lambda, pn - pi));
    return {F_, std::move(c)};
  }

 private:
  Field F_;
  std::vector<Fq> c_;
};

namespace detail {

// Determinant over F_q by elimination.
inline Fq det(const Field& F, std::vector<std::vector<Fq>> m) {
  const std::size_t n = m.size();
  Fq d = F.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == F.zero()) ++piv;
    if (piv == n) return F.zero();
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = F.neg(d);
    }
    d = F.mul(d, m[c][c]);
    const Fq inv = F.inv(m[c][c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == F.zero()) continue;
      const Fq f = F.mul(m[r][c], inv);
      for (std::size_t j = c; j < n; ++j) m[r][j] = F.sub(m[r][j], F.mul(f, m[c][j]));
    }
  }
  return d;
}

inline Fq frob_pow(const Field& F, Fq x, int i) {
  for (int j = 0; j < i; ++j) x = F.frobenius(x);
  return x;
}

}  // namespace detail

/// det (w_j^{p^i})_{i,j}; zero exactly when the w_j are F_p-dependent.
inline Fq moore_det(const Field& F, std::span<const Fq> w) {
  require(!w.empty(), errc::invalid_argument, "empty Moore matrix");
  const std::size_t n = w.size();
  std::vector<std::vector<Fq>> m(n, std::vector<Fq>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = detail::frob_pow(F, w[j], static_cast<int>(i));
  return detail::det(F, std::move(m));
}

/// All p^n elements of the F_p-span of w, enumerated with the coefficient of
/// w_0 varying fastest.
inline std::vector<Fq> span_elements(const Field& F, std::span<const Fq> w) {
  std::vector<Fq> out{F.zero()};
  for (Fq wi : w) {
    const std::size_t sz = out.size();
    for (std::uint32_t c = 1; c < F.p(); ++c)
      for (std::size_t j = 0; j < sz; ++j) out.push_back(F.add(out[j], F.scale(wi, c)));
  }
  return out;
}

/// prod_{a in span(w)} (X - a), expanded.
inline AdditivePolynomial additive_from_span(const Field& F, std::span<const Fq> w) {
  require(!w.empty(), errc::invalid_argument, "empty span");
  require(moore_det(F, w) != F.zero(), errc::dependent_span, "spanning elements are F_p-dependent");
  const auto elems = span_elements(F, w);
  std::vector<Fq> poly{F.one()};  // poly[d] = coefficient of X^d
  for (Fq a : elems) {
    std::vector<Fq> next(poly.size() + 1, F.zero());
    const Fq na = F.neg(a);
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] = F.add(next[d + 1], poly[d]);
      next[d] = F.add(next[d], F.mul(poly[d], na));
    }
    poly = std::move(next);
  }
  std::vector<Fq> c;
  std::size_t pe = 1;
  for (std::size_t d = 0; d < poly.size(); ++d) {
    if (d == pe) {
      c.push_back(poly[d]);
      pe *= F.p();
    } else {
      require(poly[d] == F.zero(), errc::invalid_argument, "span product has a non-additive term");
    }
  }
  return {F, std::move(c)};
}

/// Delta(w_1..w_n, X) / Delta(w_1..w_n), expanding along the symbolic column.
inline AdditivePolynomial additive_from_moore(const Field& F, std::span<const Fq> w) {
  require(!w.empty(), errc::invalid_argument, "empty Moore matrix");
  const Fq delta = moore_det(F, w);
  require(delta != F.zero(), errc::dependent_span, "spanning elements are F_p-dependent");
  const std::size_t n = w.size();
  std::vector<Fq> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    // Minor: drop row i and the symbolic column.
    std::vector<std::vector<Fq>> minor;
    for (std::size_t r = 0; r <= n; ++r) {
      if (r == i) continue;
      std::vector<Fq> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = detail::frob_pow(F, w[j], static_cast<int>(r));
      minor.push_back(std::move(row));
    }
    Fq cof = detail::det(F, std::move(minor));
    if ((i + n) % 2 == 1) cof = F.neg(cof);
    c[i] = F.div(cof, delta);
  }
  return {F, std::move(c)};
}

inline Fq additive_eval(const AdditivePolynomial& P, Fq x) {
  const Field& F = P.field();
  Fq acc = F.zero();
  for (Fq c : P.coeffs()) {
    acc = F.add(acc, F.mul(c, x));
    x = F.frobenius(x);
  }
  return acc;
}

/// x^p of a series, coefficientwise: known modulo t^{p N} when x is known
/// modulo t^N.
inline LaurentSeries frobenius(const LaurentSeries& x) {
  const Field& F = x.field();
  const int p = static_cast<int>(F.p());
  if (x.is_zero()) return LaurentSeries::zero(F, x.precision() * p);
  std::vector<Fq> c(static_cast<std::size_t>(x.relative_precision()) * p, F.zero());
  const auto src = x.coeffs();
  for (std::size_t i = 0; i < src.size(); ++i) c[i * p] = F.frobenius(src[i]);
  return LaurentSeries::from_coeffs(F, x.valuation() * p, std::move(c), x.precision() * p);
}

inline LaurentSeries additive_eval(const AdditivePolynomial& P, const LaurentSeries& x) {
  require(P.field() == x.field(), errc::field_mismatch, "series over a different field");
  LaurentSeries acc;
  bool have = false;
  LaurentSeries pw = x;
  for (Fq c : P.coeffs()) {
    const LaurentSeries term = pw.scaled(c);
    acc = have ? acc + term : term;
    have = true;
    pw = frobenius(pw);
  }
  return acc;
}

}  // namespace hkg

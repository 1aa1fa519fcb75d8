#pragma once

// Slow, obviously-correct reference computations used as test oracles. Nothing
// here shares code with the library beyond Field arithmetic and the series
// container itself.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hkg/field.hpp"
#include "hkg/series.hpp"

namespace oracle {

using hkg::Field;
using hkg::Fq;
using hkg::LaurentSeries;

inline LaurentSeries make(const Field& F, int val, const std::vector<long>& c, int prec) {
  std::vector<Fq> v;
  for (long x : c) v.push_back(F.from_int(x));
  return LaurentSeries::from_coeffs(F, val, v, prec);
}

inline Fq at(const LaurentSeries& s, int e) {
  if (s.is_zero() || e < s.valuation() || e >= s.precision()) return Fq{0};
  return s.coeff(e);
}

/// Double loop over coefficients, with the usual relative-precision bound.
inline LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
  const Field& F = a.field();
  const int va = a.is_zero() ? a.precision() : a.valuation();
  const int vb = b.is_zero() ? b.precision() : b.valuation();
  const int prec = std::min(va + b.precision(), vb + a.precision());
  if (a.is_zero() || b.is_zero()) return LaurentSeries::zero(F, prec);
  std::vector<Fq> c(static_cast<std::size_t>(std::max(0, prec - va - vb)), F.zero());
  for (int i = va; i < a.precision(); ++i)
    for (int j = vb; j < b.precision(); ++j) {
      const int e = i + j;
      if (e >= prec) break;
      c[static_cast<std::size_t>(e - va - vb)] =
          F.add(c[static_cast<std::size_t>(e - va - vb)], F.mul(at(a, i), at(b, j)));
    }
  return LaurentSeries::from_coeffs(F, va + vb, c, prec);
}

inline LaurentSeries power(const LaurentSeries& a, int e) {
  LaurentSeries r = LaurentSeries::constant(a.field(), a.field().one(), a.relative_precision());
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

/// Schoolbook long division a / b, keeping the relative precision of both.
inline LaurentSeries divide(const LaurentSeries& a, const LaurentSeries& b) {
  const Field& F = a.field();
  const int vb = b.valuation();
  const int rel = std::min(a.relative_precision(), b.relative_precision());
  const int va = a.valuation();
  std::vector<Fq> rem(static_cast<std::size_t>(rel), F.zero());
  for (int i = 0; i < rel; ++i) rem[static_cast<std::size_t>(i)] = at(a, va + i);
  std::vector<Fq> q(static_cast<std::size_t>(rel), F.zero());
  const Fq lead_inv = F.inv(b.leading());
  for (int i = 0; i < rel; ++i) {
    const Fq c = F.mul(rem[static_cast<std::size_t>(i)], lead_inv);
    q[static_cast<std::size_t>(i)] = c;
    for (int j = 0; i + j < rel; ++j)
      rem[static_cast<std::size_t>(i + j)] =
          F.sub(rem[static_cast<std::size_t>(i + j)], F.mul(c, at(b, vb + j)));
  }
  return LaurentSeries::from_coeffs(F, va - vb, q, va - vb + rel);
}

/// f(g) as sum_e c_e g^e with powers by repeated multiplication; the polar
/// part goes through 1/g by long division.
inline LaurentSeries compose(const LaurentSeries& f, const LaurentSeries& g, int target) {
  const Field& F = f.field();
  LaurentSeries acc = LaurentSeries::zero(F, target);
  const LaurentSeries one = LaurentSeries::constant(F, F.one(), target + 64);
  const LaurentSeries ginv = divide(one.truncated(g.relative_precision()), g);
  for (int e = f.valuation(); e < f.precision(); ++e) {
    const Fq c = at(f, e);
    if (c == F.zero()) continue;
    LaurentSeries term = LaurentSeries::constant(F, c, target + 64);
    const LaurentSeries& base = e >= 0 ? g : ginv;
    for (int i = 0; i < std::abs(e); ++i) term = mul(term, base);
    acc = acc + term.truncated(target);
  }
  return acc.truncated(target);
}

/// h with h^den = f^num (f a unit with leading coefficient 1), each
/// coefficient found by trying every field element.
inline std::vector<Fq> root_by_search(const LaurentSeries& f, int num, int den, int terms) {
  const Field& F = f.field();
  LaurentSeries target = LaurentSeries::constant(F, F.one(), terms);
  const LaurentSeries ft = f.truncated(terms);
  if (num >= 0) {
    target = power(ft, num).truncated(terms);
  } else {
    target = divide(LaurentSeries::constant(F, F.one(), terms), power(ft, -num)).truncated(terms);
  }
  std::vector<Fq> h{F.one()};
  for (int n = 1; n < terms; ++n) {
    bool found = false;
    for (std::uint32_t v = 0; v < F.q() && !found; ++v) {
      auto trial = h;
      trial.push_back(F.from_index(v));
      const LaurentSeries hs = LaurentSeries::from_coeffs(F, 0, trial, n + 1);
      if (at(power(hs, den), n) == at(target, n)) {
        h.push_back(F.from_index(v));
        found = true;
      }
    }
    if (!found) return {};
  }
  return h;
}

/// (1 + c t^m)^{-1/m} through the base-p digits of -1/m in Z_p:
/// (1 + u)^{sum d_i p^i} = prod (1 + u^{p^i})^{d_i} in characteristic p.
inline LaurentSeries phi_by_digits(const Field& F, Fq c, long m, int N) {
  const long p = F.p();
  // Digits of -1/m in Z_p: with r_0 = -1, d_i = r_i / m mod p and
  // r_{i+1} = (r_i - m d_i) / p.
  long minv = 1;
  while ((minv * m) % p != 1) ++minv;
  std::vector<long> digits;
  long r = -1;
  for (long pk = 1; m * pk < N; pk *= p) {
    const long d = (((r % p) + p) % p) * minv % p;
    digits.push_back(d);
    r = (r - m * d) / p;
  }
  LaurentSeries acc = LaurentSeries::constant(F, F.one(), N);
  long pk = 1;
  Fq cpow = c;
  for (long d : digits) {
    if (m * pk >= N) break;
    const LaurentSeries fac = LaurentSeries::constant(F, F.one(), N) + LaurentSeries::monomial(F, cpow, static_cast<int>(m * pk), N);
    for (long i = 0; i < d; ++i) acc = mul(acc, fac).truncated(N);
    pk *= p;
    cpow = F.pow(cpow, p);
  }
  return acc.shifted(1).truncated(N);
}

inline LaurentSeries random_series(const Field& F, std::mt19937_64& rng, int val, int rel, bool unit_lead = false) {
  std::vector<Fq> c;
  for (int i = 0; i < rel; ++i) c.push_back(F.from_index(static_cast<std::uint32_t>(rng() % F.q())));
  if (unit_lead) c[0] = F.one();
  while (c[0] == F.zero()) c[0] = F.from_index(static_cast<std::uint32_t>(rng() % F.q()));
  return LaurentSeries::from_coeffs(F, val, c, val + rel);
}

}  // namespace oracle

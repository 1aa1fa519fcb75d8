#pragma once

// The Nottingham group: normalized automorphisms t -> t + a_2 t^2 + ... of
// k[[t]] under substitution, with the convention (s o u)(t) = s(u(t)).

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "hkg/error.hpp"
#include "hkg/field.hpp"
#include "hkg/series.hpp"

namespace hkg {

class NottinghamElement {
 public:
  static constexpr int min_precision = 2;
  static constexpr int default_precision = 64;

  NottinghamElement() = default;

  explicit NottinghamElement(LaurentSeries s) : s_(std::move(s)) {
    require(!s_.is_zero() && s_.valuation() == 1 && s_.leading() == s_.field().one(), errc::not_normalized,
            "a Nottingham element has the form t + a_2 t^2 + ...");
    require(s_.precision() >= min_precision, errc::insufficient_precision, "precision below the minimum");
  }

  static NottinghamElement identity(const Field& F, int prec) {
    return NottinghamElement(LaurentSeries::variable(F, prec));
  }

  const LaurentSeries& series() const { return s_; }
  const Field& field() const { return s_.field(); }
  int precision() const { return s_.precision(); }

  /// s(t) - t, known modulo t^precision.
  LaurentSeries displacement() const { return s_ - LaurentSeries::variable(field(), precision()); }

  bool is_identity() const { return displacement().is_zero(); }

 private:
  LaurentSeries s_;
};

inline NottinghamElement nott_mul(const NottinghamElement& a, const NottinghamElement& b) {
  return NottinghamElement(compose(a.series(), b.series()));
}

inline NottinghamElement nott_inverse(const NottinghamElement& a) { return NottinghamElement(reversion(a.series())); }

/// a^e by repeated squaring; negative exponents go through the inverse.
inline NottinghamElement nott_pow(const NottinghamElement& a, long e) {
  if (e < 0) return nott_pow(nott_inverse(a), -e);
  NottinghamElement result = NottinghamElement::identity(a.field(), a.precision());
  NottinghamElement base = a;
  while (e) {
    if (e & 1) result = nott_mul(result, base);
    e >>= 1;
    if (e) base = nott_mul(base, base);
  }
  return result;
}

/// t (1 + Cbar t^m)^{-1/m} to precision N.
inline NottinghamElement build_phi(const LaurentSeries& cbar, long m, int N) {
  const Field& F = cbar.field();
  require(m >= 1, errc::invalid_argument, "m must be positive");
  require(m % static_cast<long>(F.p()) != 0, errc::wild_exponent, "m is divisible by p");
  require(N >= NottinghamElement::min_precision, errc::insufficient_precision, "precision below the minimum");
  require(cbar.is_zero() || cbar.valuation() > -m, errc::not_normalized, "valuation of Cbar must exceed -m");
  const LaurentSeries u = LaurentSeries::constant(F, F.one(), N - 1) + cbar.shifted(static_cast<int>(m));
  return NottinghamElement(pow_frac(u, -1, m).shifted(1));
}

inline NottinghamElement build_phi(const Field& F, Fq c, long m, int N) {
  return build_phi(LaurentSeries::constant(F, c, N), m, N);
}

/// v(s(t) - t) - 1: the largest i with s in G_i under the lower numbering.
inline int ramification_break(const NottinghamElement& s) {
  const LaurentSeries d = s.displacement();
  require(!d.is_zero(), errc::no_break, "identity at precision " + std::to_string(s.precision()));
  return d.valuation() - 1;
}

struct OrderReport {
  bool determined = false;
  long order = 0;  // p^h; only a candidate when not determined
  int h = 0;
  int precision = 0;
  std::string reason;
};

/// Order by repeated p-th powers. A power that becomes the identity modulo
/// t^N only counts when N leaves room to see a nontrivial p-th power: if the
/// previous power has break b, a nontrivial p-th power of it would displace t
/// by at least t^{p(b+1)}, so N must exceed p(b+1).
inline OrderReport nott_order(const NottinghamElement& s, int max_h) {
  OrderReport r;
  r.precision = s.precision();
  const long p = s.field().p();
  if (s.is_identity()) {
    r.determined = true;
    r.order = 1;
    r.reason = "identity at precision";
    return r;
  }
  NottinghamElement cur = s;
  long order = 1;
  for (int h = 1; h <= max_h; ++h) {
    const int b = ramification_break(cur);
    cur = nott_pow(cur, p);
    order *= p;
    if (cur.is_identity()) {
      if (static_cast<long>(s.precision()) >= p * (b + 1) + 1) {
        r.determined = true;
        r.order = order;
        r.h = h;
        r.reason = "p^h-th power is the identity";
      } else {
        r.order = order;
        r.h = h;
        r.reason = "identity reached only at the truncation boundary";
      }
      return r;
    }
  }
  r.h = max_h;
  r.reason = "max_h exceeded";
  return r;
}

struct FiltrationJump {
  int lower_break = 0;
  long group_order = 0;  // |G_b|
};

/// Distinct lower breaks of a finite group of Nottingham elements, with the
/// order of each G_b. The list must be closed under composition.
inline std::vector<FiltrationJump> filtration_jumps(const std::vector<NottinghamElement>& elems) {
  auto index_of = [&](const NottinghamElement& x) -> long {
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (agree(elems[i].series(), x.series())) return static_cast<long>(i);
    return -1;
  };
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j)
      require(index_of(nott_mul(elems[i], elems[j])) >= 0, errc::not_a_group,
              "product of elements " + std::to_string(i) + " and " + std::to_string(j) + " is not in the list");
  std::vector<int> breaks;
  for (const auto& e : elems)
    if (!e.is_identity()) breaks.push_back(ramification_break(e));
  std::vector<int> distinct = breaks;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<FiltrationJump> out;
  for (int b : distinct) {
    const long n = std::count_if(breaks.begin(), breaks.end(), [&](int x) { return x >= b; });
    out.push_back({b, n + 1});
  }
  return out;
}

/// phi o s o phi^{-1} for a uniformizer change phi of valuation 1.
inline NottinghamElement conjugate(const NottinghamElement& s, const LaurentSeries& phi) {
  require(phi.field() == s.field(), errc::field_mismatch, "series over different fields");
  require(!phi.is_zero() && phi.valuation() == 1, errc::not_a_uniformizer, "phi must have valuation 1");
  const Field& F = phi.field();
  const Fq a = phi.leading();
  // phi = a psi with psi normalized, so phi^{-1}(t) = psi^{-1}(t / a).
  const LaurentSeries psi_inv = reversion(phi.scaled(F.inv(a)));
  const LaurentSeries scaled_t = LaurentSeries::monomial(F, F.inv(a), 1, phi.precision());
  const LaurentSeries phi_inv = compose(psi_inv, scaled_t);
  return NottinghamElement(compose(phi, compose(s.series(), phi_inv)));
}

/// f^{-1/m} for f of valuation -m.
inline LaurentSeries canonical_uniformizer(const LaurentSeries& f, long m) {
  require(m >= 1, errc::invalid_argument, "m must be positive");
  require(m % static_cast<long>(f.field().p()) != 0, errc::wild_root, "m is divisible by p");
  require(!f.is_zero() && f.valuation() == -m, errc::invalid_argument,
          "f must have valuation -" + std::to_string(m));
  return pow_frac(f, -1, m);
}

}  // namespace hkg

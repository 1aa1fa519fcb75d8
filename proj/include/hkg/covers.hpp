#pragma once

// Local expansions of Artin-Schreier covers at the wild point, in the
// canonical uniformizer t of the top generator, and the checks tying the
// tower action to substitution by Nottingham elements.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hkg/additive.hpp"
#include "hkg/error.hpp"
#include "hkg/field.hpp"
#include "hkg/group.hpp"
#include "hkg/nottingham.hpp"
#include "hkg/series.hpp"
#include "hkg/tower.hpp"

namespace hkg {

/// The cover y^p - w^{p-1} y = x^m (w = 1 gives y^p - y = x^m), with
/// y = t^{-m} and x = t^{-p} (1 - w^{p-1} t^{(p-1) m})^{1/m}.
struct ASCoverLocal {
  Field field;
  long m = 0;
  int N = 0;
  Fq w;
  LaurentSeries x, y;
  bool relation_ok = false;
};

inline ASCoverLocal expand_as_cover(const Field& F, long m, int N, std::optional<Fq> w_opt = std::nullopt) {
  const long p = F.p();
  require(m > 1, errc::invalid_argument, "m must exceed 1");
  require(m % p != 0, errc::wild_exponent, "m is divisible by p");
  require(N > 0, errc::invalid_argument, "precision must be positive");
  const Fq w = w_opt.value_or(F.one());
  require(w != F.zero(), errc::invalid_argument, "w must be nonzero");
  ASCoverLocal c;
  c.field = F;
  c.m = m;
  c.N = N;
  c.w = w;
  const Fq wp = F.pow(w, p - 1);
  c.y = LaurentSeries::monomial(F, F.one(), static_cast<int>(-m), N);
  const int unit_prec = N + static_cast<int>(p);
  LaurentSeries base = LaurentSeries::constant(F, F.one(), unit_prec);
  if ((p - 1) * m < unit_prec) base = base - LaurentSeries::monomial(F, wp, static_cast<int>((p - 1) * m), unit_prec);
  c.x = pow_frac(base, 1, m).shifted(static_cast<int>(-p));
  const LaurentSeries residual = pow_int(c.y, p) - c.y.scaled(wp) - pow_int(c.x, m);
  c.relation_ok = residual.is_zero();
  return c;
}

/// The one-step tower of the cover over k(x), with Z/p acting by
/// sigma^j(y) = y + j w.
inline TowerAction as_tower(const Field& F, long m, Fq w) {
  const long p = F.p();
  TowerSpec spec;
  spec.field = F;
  spec.s = 1;
  spec.n = {1};
  spec.poles = {p, m};
  spec.jumps = {m};
  const std::vector<Fq> span{w};
  spec.relations = {{additive_from_span(F, span), TowerElement::monomial({static_cast<int>(m), 0}, F.one())}};
  FiniteGroup G = FiniteGroup::cyclic(static_cast<std::size_t>(p));
  std::vector<TowerElement> C;
  for (long j = 0; j < p; ++j) C.push_back(TowerElement::constant(2, F.scale(w, j)));
  return TowerAction(TowerRing(spec), GroupAction{std::move(G), {std::move(C)}, {}});
}

/// Value of a tower element under f_i -> series[i].
inline LaurentSeries evaluate(const TowerElement& x, const std::vector<LaurentSeries>& series, int prec) {
  require(x.width() == series.size(), errc::invalid_argument, "one series per generator is required");
  const Field& F = series.front().field();
  LaurentSeries acc = LaurentSeries::zero(F, prec);
  for (const auto& [e, c] : x.terms()) {
    // Scale at the end: a constant factor of precision prec would cap the
    // relative precision of polar products.
    std::optional<LaurentSeries> term;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = term ? *term * pow_int(series[i], e[i]) : pow_int(series[i], e[i]);
    acc = acc + (term ? term->scaled(c) : LaurentSeries::constant(F, c, prec));
  }
  return acc;
}

struct TransportReport {
  bool pass = false;
  bool c_in_span = false;
  bool y_ok = false, x_ok = false, break_ok = false;
  int y_residual_val = 0, x_residual_val = 0;  // valuation of the residual (= precision when zero)
  int y_precision = 0, x_precision = 0;
  int lower_break = -1;
};

/// (i) y o Phi_c = y + c, (ii) x o Phi_c = x, (iii) the break of Phi_c is m.
inline TransportReport verify_action_transport(const ASCoverLocal& cov, Fq c) {
  const Field& F = cov.field;
  const long p = F.p();
  TransportReport r;
  for (long j = 0; j < p; ++j)
    if (F.scale(cov.w, j) == c) r.c_in_span = true;
  const int NPhi = cov.N + static_cast<int>(std::max(cov.m, p));
  const NottinghamElement phi = build_phi(F, c, cov.m, NPhi);
  const LaurentSeries y_res = compose(cov.y, phi.series()) - (cov.y + LaurentSeries::constant(F, c, cov.N));
  const LaurentSeries x_res = compose(cov.x, phi.series()) - cov.x;
  r.y_residual_val = y_res.valuation();
  r.y_precision = y_res.precision();
  r.x_residual_val = x_res.valuation();
  r.x_precision = x_res.precision();
  r.y_ok = y_res.is_zero() && y_res.precision() >= cov.N - static_cast<int>(cov.m);
  r.x_ok = x_res.is_zero() && x_res.precision() >= cov.N;
  if (c == F.zero()) {
    r.break_ok = phi.is_identity();
  } else {
    r.lower_break = ramification_break(phi);
    r.break_ok = r.lower_break == cov.m;
  }
  r.pass = r.y_ok && r.x_ok && r.break_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Towers with supplied expansions.

struct ExpansionReport {
  bool pass = true;
  std::string detail;
  int failing_level = -1;
  int precision = 0;  // least precision at which the relations were compared
};

/// Checks valuations v(f_i) = -m_i and the relations P_i(f_i) = D_i(f).
inline ExpansionReport validate_expansions(const TowerRing& R, const std::vector<LaurentSeries>& f) {
  ExpansionReport rep;
  require(f.size() == R.width(), errc::invalid_argument, "one expansion per generator is required");
  rep.precision = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(f[i].field() == R.field(), errc::field_mismatch, "expansion over a different field");
    if (f[i].is_zero() || f[i].valuation() != -R.spec().poles[i]) {
      rep.pass = false;
      rep.failing_level = static_cast<int>(i);
      rep.detail = "f_" + std::to_string(i) + " does not have valuation -" + std::to_string(R.spec().poles[i]);
      return rep;
    }
  }
  for (std::size_t i = 1; i < f.size(); ++i) {
    const Relation& rel = R.spec().relations[i - 1];
    const LaurentSeries lhs = additive_eval(rel.P, f[i]);
    const LaurentSeries rhs = evaluate(rel.D, f, lhs.precision());
    const LaurentSeries res = lhs - rhs;
    rep.precision = std::min(rep.precision, res.precision());
    if (!res.is_zero()) {
      rep.pass = false;
      rep.failing_level = static_cast<int>(i);
      rep.detail = "relation " + std::to_string(i) + " fails at t^" + std::to_string(res.valuation());
      return rep;
    }
  }
  return rep;
}

/// The Nottingham element of g: t -> t (1 + C_s(g) t^{m_s})^{-1/m_s}, where
/// t is the canonical uniformizer of the top generator f_s = t^{-m_s}.
inline NottinghamElement localize(const TowerAction& A, const std::vector<LaurentSeries>& f, std::size_t g, int N) {
  const TowerRing& R = A.ring();
  require(R.s() >= 1, errc::shape_error, "tower has no wild step");
  const long m = R.spec().poles.back();
  const LaurentSeries cbar = evaluate(A.cocycle(static_cast<std::size_t>(R.s()), g), f, N);
  return build_phi(cbar, m, N);
}

struct TowerTransportReport {
  bool pass = true;
  int failing_level = -1;
  int precision = 0;  // least precision at which an identity was compared
};

/// f_i o Phi_g = f_i + C_i(g) for every generator.
inline TowerTransportReport verify_tower_transport(const TowerAction& A, const std::vector<LaurentSeries>& f,
                                                   std::size_t g, int N) {
  const NottinghamElement phi = localize(A, f, g, N);
  TowerTransportReport rep;
  rep.precision = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const LaurentSeries lhs = compose(f[i], phi.series());
    const LaurentSeries rhs = f[i] + evaluate(A.cocycle(i, g), f, lhs.precision());
    const LaurentSeries res = lhs - rhs;
    rep.precision = std::min(rep.precision, res.precision());
    if (!res.is_zero()) {
      rep.pass = false;
      rep.failing_level = static_cast<int>(i);
      return rep;
    }
  }
  return rep;
}

}  // namespace hkg

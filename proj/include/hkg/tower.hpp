#pragma once

// Artin-Schreier towers F_1 = k(f_0) < F_2 < ... < F_{s+1} with relations
// P_i(f_i) = D_i, elements in the reduced monomial basis, and group actions
// given by cocycles sigma(f_i) = f_i + C_i(sigma).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hkg/additive.hpp"
#include "hkg/error.hpp"
#include "hkg/field.hpp"
#include "hkg/group.hpp"
#include "hkg/linalg.hpp"
#include "hkg/semigroup.hpp"

namespace hkg {

using Exps = std::vector<int>;

/// Finite F_q-combination of monomials f_0^{a_0} ... f_s^{a_s}.
class TowerElement {
 public:
  TowerElement() = default;
  explicit TowerElement(std::size_t width) : width_(width) {}

  static TowerElement monomial(const Exps& e, Fq c) {
    TowerElement x(e.size());
    if (c.v != 0) x.terms_[e] = c;
    return x;
  }
  static TowerElement constant(std::size_t width, Fq c) { return monomial(Exps(width, 0), c); }

  std::size_t width() const { return width_; }
  const std::map<Exps, Fq>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Fq coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Fq{0} : it->second;
  }

  void add_term(const Field& F, const Exps& e, Fq c) {
    require(e.size() == width_, errc::invalid_argument, "exponent vector has the wrong length");
    if (c.v == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (inserted) return;
    it->second = F.add(it->second, c);
    if (it->second.v == 0) terms_.erase(it);
  }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && is_origin(terms_.begin()->first)); }
  Fq constant_term() const { return coeff(Exps(width_, 0)); }

  /// Largest generator index that occurs with a nonzero exponent, or -1.
  int support_top() const {
    int top = -1;
    for (const auto& [e, c] : terms_)
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) top = std::max(top, static_cast<int>(i));
    return top;
  }

  /// The same element with exponent vectors padded (or cut) to `width`.
  TowerElement widened(std::size_t width) const {
    TowerElement r(width);
    for (const auto& [e, c] : terms_) {
      Exps f(width, 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i < width)
          f[i] = e[i];
        else
          require(e[i] == 0, errc::invalid_argument, "cannot drop a generator that occurs");
      }
      r.terms_[f] = c;
    }
    return r;
  }

  friend bool operator==(const TowerElement& a, const TowerElement& b) {
    return a.width_ == b.width_ && a.terms_ == b.terms_;
  }

 private:
  static bool is_origin(const Exps& e) {
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
  }

  std::size_t width_ = 0;
  std::map<Exps, Fq> terms_;
};

struct Relation {
  AdditivePolynomial P;
  TowerElement D;
};

struct TowerSpec {
  Field field;
  int s = 0;
  std::vector<int> n;           // n_1 .. n_s
  std::vector<long> poles;      // m_0 .. m_s
  std::vector<long> jumps;      // lambda_1 .. lambda_s
  std::vector<Relation> relations;

  std::size_t width() const { return static_cast<std::size_t>(s) + 1; }
  MonomialShape shape() const { return {field.p(), n, poles}; }
};

/// p-adic split m = p^h * lambda with lambda prime to p.
inline std::pair<int, long> split_p(long m, long p) {
  int h = 0;
  while (m != 0 && m % p == 0) {
    m /= p;
    ++h;
  }
  return {h, m};
}

class TowerRing {
 public:
  TowerRing() = default;
  explicit TowerRing(TowerSpec spec) : spec_(std::move(spec)), cache_(std::make_shared<Cache>()) { validate(); }

  const TowerSpec& spec() const { return spec_; }
  const Field& field() const { return spec_.field; }
  int s() const { return spec_.s; }
  std::size_t width() const { return spec_.width(); }
  MonomialShape shape() const { return spec_.shape(); }

  long exponent_bound(std::size_t i) const { return shape().exponent_bound(i); }

  TowerElement zero() const { return TowerElement(width()); }
  TowerElement one() const { return constant(field().one()); }
  TowerElement constant(Fq c) const { return TowerElement::constant(width(), c); }
  TowerElement generator(std::size_t i) const {
    Exps e(width(), 0);
    e[i] = 1;
    return reduce_monomial(e);
  }

  /// Pole order: max degree over the terms; -1 for zero.
  long degree(const TowerElement& x) const {
    long d = -1;
    for (const auto& [e, c] : x.terms()) d = std::max(d, shape().degree(e));
    return d;
  }

  bool is_reduced(const TowerElement& x) const {
    if (x.width() != width()) return false;
    for (const auto& [e, c] : x.terms()) {
      if (e[0] < 0) return false;
      for (std::size_t i = 1; i < width(); ++i)
        if (e[i] < 0 || e[i] >= exponent_bound(i)) return false;
    }
    return true;
  }

  /// Normal form of an element whose exponents may exceed the bounds.
  TowerElement reduce(const TowerElement& x) const {
    check(x);
    TowerElement r = zero();
    for (const auto& [e, c] : x.terms()) accumulate(r, reduce_monomial(e), c);
    return r;
  }

  TowerElement add(const TowerElement& a, const TowerElement& b) const {
    check(a);
    check(b);
    TowerElement r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(field(), e, c);
    return r;
  }
  TowerElement neg(const TowerElement& a) const { return scale(a, field().neg(field().one())); }
  TowerElement sub(const TowerElement& a, const TowerElement& b) const { return add(a, neg(b)); }
  TowerElement scale(const TowerElement& a, Fq c) const {
    check(a);
    TowerElement r = zero();
    for (const auto& [e, x] : a.terms()) r.add_term(field(), e, field().mul(x, c));
    return r;
  }

  TowerElement mul(const TowerElement& a, const TowerElement& b) const {
    check(a);
    check(b);
    TowerElement r = zero();
    Exps e(width());
    for (const auto& [ea, ca] : a.terms())
      for (const auto& [eb, cb] : b.terms()) {
        for (std::size_t i = 0; i < width(); ++i) e[i] = ea[i] + eb[i];
        accumulate(r, reduce_monomial(e), field().mul(ca, cb));
      }
    return r;
  }

  TowerElement pow(const TowerElement& a, long e) const {
    require(e >= 0, errc::invalid_argument, "negative power of a tower element");
    TowerElement result = one(), base = a;
    while (e) {
      if (e & 1) result = mul(result, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return result;
  }

  /// x^p, using (sum c m)^p = sum c^p m^p in characteristic p.
  TowerElement frobenius(const TowerElement& x) const {
    check(x);
    TowerElement r = zero();
    const int p = static_cast<int>(field().p());
    Exps e(width());
    for (const auto& [ex, c] : x.terms()) {
      for (std::size_t i = 0; i < width(); ++i) e[i] = ex[i] * p;
      accumulate(r, reduce_monomial(e), field().frobenius(c));
    }
    return r;
  }

  TowerElement additive_eval(const AdditivePolynomial& P, const TowerElement& x) const {
    require(P.field() == field(), errc::field_mismatch, "additive polynomial over a different field");
    TowerElement acc = zero(), pw = x;
    for (std::size_t j = 0; j < P.coeffs().size(); ++j) {
      acc = add(acc, scale(pw, P.coeffs()[j]));
      if (j + 1 < P.coeffs().size()) pw = frobenius(pw);
    }
    return acc;
  }

  /// The ring map sending f_i to images[i] (elements of this ring), applied
  /// to x whose exponent vectors have images.size() entries.
  TowerElement substitute(const TowerElement& x, const std::vector<TowerElement>& images) const {
    require(x.width() == images.size(), errc::invalid_argument, "substitution needs one image per generator");
    std::vector<std::vector<TowerElement>> pw(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) pw[i].push_back(one());
    auto power = [&](std::size_t i, int a) -> const TowerElement& {
      while (static_cast<int>(pw[i].size()) <= a) pw[i].push_back(mul(pw[i].back(), images[i]));
      return pw[i][static_cast<std::size_t>(a)];
    };
    TowerElement r = zero();
    for (const auto& [e, c] : x.terms()) {
      TowerElement term = constant(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) term = mul(term, power(i, e[i]));
      r = add(r, term);
    }
    return r;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<Exps, TowerElement> reduced;
  };

  void check(const TowerElement& x) const {
    require(x.width() == width(), errc::invalid_argument,
            "tower element has " + std::to_string(x.width()) + " generators, ring has " + std::to_string(width()));
  }

  void accumulate(TowerElement& r, const TowerElement& x, Fq c) const {
    for (const auto& [e, v] : x.terms()) r.add_term(field(), e, field().mul(v, c));
  }

  // f^e in normal form: rewrite f_i^{p^{n_i}} = D_i - sum_{j<n_i} a_j f_i^{p^j}
  // at the highest violating index until every exponent is in range.
  TowerElement reduce_monomial(const Exps& e) const {
    int top = -1;
    for (std::size_t i = width(); i-- > 1;)
      if (e[i] >= exponent_bound(i)) {
        top = static_cast<int>(i);
        break;
      }
    if (top < 0) return TowerElement::monomial(e, field().one());
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->reduced.find(e);
      if (it != cache_->reduced.end()) return it->second;
    }
    const auto i = static_cast<std::size_t>(top);
    const Relation& rel = spec_.relations[i - 1];
    Exps base = e;
    base[i] -= static_cast<int>(exponent_bound(i));
    TowerElement r = zero();
    Exps f(width());
    for (const auto& [em, c] : rel.D.terms()) {
      for (std::size_t j = 0; j < width(); ++j) f[j] = base[j] + em[j];
      accumulate(r, reduce_monomial(f), c);
    }
    const auto& a = rel.P.coeffs();
    long pj = 1;
    for (std::size_t j = 0; j + 1 < a.size(); ++j, pj *= field().p()) {
      if (a[j].v == 0) continue;
      f = base;
      f[i] += static_cast<int>(pj);
      accumulate(r, reduce_monomial(f), field().neg(a[j]));
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->reduced.emplace(e, r);
    return r;
  }

  void validate() const {
    const TowerSpec& t = spec_;
    require(t.field.valid(), errc::invalid_field, "tower without a field");
    require(t.s >= 0, errc::shape_error, "negative number of steps");
    const auto s = static_cast<std::size_t>(t.s);
    require(t.n.size() == s && t.jumps.size() == s && t.relations.size() == s && t.poles.size() == s + 1,
            errc::shape_error, "tower needs s ranks, s jumps, s relations and s+1 poles");
    for (long m : t.poles) require(m > 0, errc::shape_error, "pole orders must be positive");
    const long p = t.field.p();
    for (std::size_t i = 1; i <= s; ++i) {
      require(t.n[i - 1] >= 1, errc::shape_error, "ranks must be positive");
      const auto [h, lam] = split_p(t.poles[i], p);
      require(lam == t.jumps[i - 1], errc::shape_error,
              "pole " + std::to_string(t.poles[i]) + " is not p^h times jump " + std::to_string(t.jumps[i - 1]));
      const Relation& rel = t.relations[i - 1];
      require(rel.P.field() == t.field, errc::field_mismatch, "relation over a different field");
      require(rel.P.n() == t.n[i - 1] && rel.P.is_monic(), errc::shape_error,
              "relation " + std::to_string(i) + " needs a monic additive polynomial of degree p^n_i");
      require(rel.D.width() == s + 1, errc::shape_error, "D_i has the wrong number of generators");
      require(rel.D.support_top() < static_cast<int>(i), errc::shape_error,
              "D_" + std::to_string(i) + " involves f_" + std::to_string(i) + " or later");
      require(is_reduced(rel.D), errc::shape_error, "D_i is not reduced");
      long pn = 1;
      for (int j = 0; j < t.n[i - 1]; ++j) pn *= p;
      require(degree(rel.D) == pn * t.poles[i], errc::shape_error,
              "deg D_" + std::to_string(i) + " = " + std::to_string(degree(rel.D)) + ", expected " +
                  std::to_string(pn * t.poles[i]));
    }
  }

  TowerSpec spec_;
  std::shared_ptr<Cache> cache_;
};

/// Group plus cocycle tables: cocycles[i-1][g] = C_i(g), and optionally
/// cocycle0[g] = C_0(g) when the group moves f_0.
struct GroupAction {
  FiniteGroup group;
  std::vector<std::vector<TowerElement>> cocycles;
  std::vector<TowerElement> cocycle0;
};

class TowerAction {
 public:
  TowerAction(TowerRing ring, GroupAction action) : ring_(std::move(ring)), a_(std::move(action)) {
    const std::size_t G = a_.group.order();
    require(a_.cocycles.size() == static_cast<std::size_t>(ring_.s()), errc::shape_error,
            "one cocycle table per tower step is required");
    for (const auto& tab : a_.cocycles) {
      require(tab.size() == G, errc::shape_error, "cocycle table must cover every group element");
      for (const auto& x : tab) require(ring_.is_reduced(x), errc::shape_error, "cocycle value is not reduced");
    }
    require(a_.cocycle0.empty() || a_.cocycle0.size() == G, errc::shape_error, "C_0 table has the wrong size");
    for (const auto& x : a_.cocycle0) require(ring_.is_reduced(x), errc::shape_error, "C_0 value is not reduced");
  }

  const TowerRing& ring() const { return ring_; }
  const GroupAction& data() const { return a_; }
  const FiniteGroup& group() const { return a_.group; }

  /// C_i(g) for i = 0..s (C_0 is zero unless supplied).
  TowerElement cocycle(std::size_t i, std::size_t g) const {
    if (i == 0) return a_.cocycle0.empty() ? ring_.zero() : a_.cocycle0[g];
    return a_.cocycles[i - 1][g];
  }

  std::vector<TowerElement> images(std::size_t g) const {
    std::vector<TowerElement> img;
    for (std::size_t i = 0; i < ring_.width(); ++i) img.push_back(ring_.add(ring_.generator(i), cocycle(i, g)));
    return img;
  }

  TowerElement apply(std::size_t g, const TowerElement& x) const {
    require(g < a_.group.order(), errc::invalid_argument, "undefined group element " + std::to_string(g));
    if (g == 0) return x;
    return ring_.substitute(x, images(g));
  }

  /// True if g fixes f_0 .. f_{i-1}.
  bool fixes_below(std::size_t g, std::size_t i) const {
    for (std::size_t j = 0; j < i; ++j)
      if (!cocycle(j, g).is_zero()) return false;
    return true;
  }

 private:
  TowerRing ring_;
  GroupAction a_;
};

/// Extends generator values of a step-i cocycle to the whole group by
/// C(x g) = C(x) + x C(g) along the spanning tree. `prefix` must already
/// carry the cocycles of the lower steps.
inline std::vector<TowerElement> extend_cocycle(const TowerAction& prefix, const std::vector<TowerElement>& gen_values) {
  const FiniteGroup& G = prefix.group();
  require(gen_values.size() == G.generators().size(), errc::shape_error, "one value per generator is required");
  std::vector<TowerElement> table(G.order(), prefix.ring().zero());
  for (std::size_t idx = 1; idx < G.bfs_order().size(); ++idx) {
    const std::size_t y = G.bfs_order()[idx];
    const auto& edge = G.tree()[y];
    table[y] = prefix.ring().add(table[edge.parent], prefix.apply(edge.parent, gen_values[edge.gen]));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Compatibility check.

struct CompatReport {
  bool pass = true;
  std::string check;  // which condition failed
  int level = 0;
  std::size_t sigma = 0, tau = 0;
  TowerElement lhs, rhs;
  std::string detail;
};

inline CompatReport compat_check(const TowerAction& A) {
  const TowerRing& R = A.ring();
  const FiniteGroup& G = A.group();
  const Field& F = R.field();
  CompatReport rep;
  auto fail_with = [&](std::string what, int level, std::size_t s, std::size_t t, TowerElement l, TowerElement r,
                       std::string detail) {
    rep.pass = false;
    rep.check = std::move(what);
    rep.level = level;
    rep.sigma = s;
    rep.tau = t;
    rep.lhs = std::move(l);
    rep.rhs = std::move(r);
    rep.detail = std::move(detail);
    return rep;
  };
  const std::size_t levels = R.width();
  for (std::size_t i = 0; i < levels; ++i) {
    if (i == 0 && A.data().cocycle0.empty()) continue;
    if (!A.cocycle(i, 0).is_zero())
      return fail_with("identity", static_cast<int>(i), 0, 0, A.cocycle(i, 0), R.zero(), "C(1) must vanish");
    for (std::size_t g = 0; g < G.order(); ++g) {
      const TowerElement& c = A.cocycle(i, g);
      if (c.support_top() >= static_cast<int>(std::max<std::size_t>(i, 1)))
        return fail_with("support", static_cast<int>(i), g, 0, c, R.zero(), "cocycle value involves f_i or later");
      if (i >= 1 && R.degree(c) >= R.spec().poles[i])
        return fail_with("degree", static_cast<int>(i), g, 0, c, R.zero(),
                         "degree " + std::to_string(R.degree(c)) + " is not below " + std::to_string(R.spec().poles[i]));
    }
  }
  for (std::size_t i = 0; i < levels; ++i) {
    if (i == 0 && A.data().cocycle0.empty()) continue;
    for (std::size_t s = 0; s < G.order(); ++s)
      for (std::size_t t = 0; t < G.order(); ++t) {
        const TowerElement lhs = A.cocycle(i, G.mul(s, t));
        const TowerElement rhs = R.add(A.cocycle(i, s), A.apply(s, A.cocycle(i, t)));
        if (!(lhs == rhs))
          return fail_with("cocycle", static_cast<int>(i), s, t, lhs, rhs, "C(st) != C(s) + s C(t)");
      }
  }
  for (std::size_t i = 1; i < levels; ++i) {
    const Relation& rel = R.spec().relations[i - 1];
    for (std::size_t g = 0; g < G.order(); ++g) {
      const TowerElement lhs = R.additive_eval(rel.P, A.cocycle(i, g));
      const TowerElement rhs = R.sub(A.apply(g, rel.D), rel.D);
      if (!(lhs == rhs))
        return fail_with("compatibility", static_cast<int>(i), g, 0, lhs, rhs, "P_i(C_i(s)) != (s - 1) D_i");
    }
    // On the subgroup fixing f_0..f_{i-1} the values are constants forming
    // the root set of P_i.
    std::vector<std::uint32_t> roots;
    for (std::size_t g = 0; g < G.order(); ++g) {
      if (!A.fixes_below(g, i)) continue;
      const TowerElement& c = A.cocycle(i, g);
      if (!c.is_constant())
        return fail_with("restriction", static_cast<int>(i), g, 0, c, R.zero(),
                         "value on the bottom subgroup is not a constant");
      const Fq w = c.constant_term();
      if (additive_eval(rel.P, w) != F.zero())
        return fail_with("restriction", static_cast<int>(i), g, 0, c, R.zero(), "bottom value is not a root of P_i");
      roots.push_back(w.v);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    long expected = 1;
    for (int j = 0; j < R.spec().n[i - 1]; ++j) expected *= F.p();
    if (static_cast<long>(roots.size()) != expected)
      return fail_with("restriction", static_cast<int>(i), 0, 0, R.zero(), R.zero(),
                       "bottom values give " + std::to_string(roots.size()) + " roots, expected " +
                           std::to_string(expected));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cocycle maps.

/// sigma -> P(C(sigma)); every image must have degree below `bound`.
inline std::vector<TowerElement> additive_apply_cocycle(const TowerRing& R, const AdditivePolynomial& P,
                                                        const std::vector<TowerElement>& C, long bound) {
  std::vector<TowerElement> out;
  for (std::size_t g = 0; g < C.size(); ++g) {
    TowerElement v = R.additive_eval(P, C[g]);
    require(R.degree(v) < bound, errc::degree_overflow,
            "P(C(" + std::to_string(g) + ")) has degree " + std::to_string(R.degree(v)) + " >= " +
                std::to_string(bound));
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rescaling f_i -> lambda f_i + a.

inline TowerAction rescale_generator(const TowerAction& A, int i, Fq lambda, const TowerElement& a) {
  const TowerRing& R = A.ring();
  const Field& F = R.field();
  require(lambda != F.zero(), errc::invalid_argument, "lambda must be nonzero");
  require(i >= 1 && i <= R.s(), errc::invalid_argument, "generator index out of range");
  require(R.is_reduced(a) && a.support_top() < i, errc::invalid_argument, "a must involve only f_0..f_{i-1}");
  require(R.degree(a) < R.spec().poles[static_cast<std::size_t>(i)], errc::invalid_argument,
          "deg a must be below the pole order of f_i");
  const auto ui = static_cast<std::size_t>(i);
  const FiniteGroup& G = A.group();

  TowerSpec spec = R.spec();
  const Relation& old = spec.relations[ui - 1];
  const AdditivePolynomial P = old.P.rescaled(lambda);
  long pn = 1;
  for (int j = 0; j < old.P.n(); ++j) pn *= F.p();
  const TowerElement D = R.add(R.scale(old.D, F.pow(lambda, pn)), R.additive_eval(P, a));
  spec.relations[ui - 1] = {P, D};

  GroupAction act = A.data();
  for (std::size_t g = 0; g < G.order(); ++g)
    act.cocycles[ui - 1][g] = R.add(R.scale(A.cocycle(ui, g), lambda), R.sub(A.apply(g, a), a));

  // Later steps: rewrite data through f_i = lambda^{-1} (f'_i - a), one
  // relation at a time so each substitution only needs the relations below.
  for (std::size_t j = ui + 1; j <= static_cast<std::size_t>(R.s()); ++j) {
    const TowerRing partial(spec);
    std::vector<TowerElement> img;
    for (std::size_t v = 0; v < R.width(); ++v) img.push_back(partial.generator(v));
    img[ui] = partial.scale(partial.sub(partial.generator(ui), a), F.inv(lambda));
    spec.relations[j - 1].D = partial.substitute(R.spec().relations[j - 1].D, img);
    const TowerRing next(spec);
    for (std::size_t g = 0; g < G.order(); ++g) act.cocycles[j - 1][g] = next.substitute(A.cocycle(j, g), img);
  }
  return TowerAction(TowerRing(spec), std::move(act));
}

// ---------------------------------------------------------------------------
// Representation filtration.

struct RepLevel {
  std::size_t j = 0;       // index in the semigroup enumeration
  long m = 0;              // m_j
  std::size_t kernel = 0;  // |ker rho_j|
};

struct RepJumps {
  std::vector<RepLevel> levels;
  std::vector<std::size_t> jumps;  // c with ker rho_c > ker rho_{c+1}
  std::vector<long> generator_poles;  // m_{c+1} for each jump
  bool consistent = false;  // m_{c_i+1} are exactly the poles of f_1..f_s
};

inline RepJumps representation_jumps(const TowerAction& A) {
  const TowerRing& R = A.ring();
  const FiniteGroup& G = A.group();
  const NumericalSemigroup S(R.field().p(), R.spec().poles);
  const long top = *std::max_element(R.spec().poles.begin(), R.spec().poles.end());
  std::vector<std::size_t> kernel(G.order());
  for (std::size_t g = 0; g < G.order(); ++g) kernel[g] = g;
  RepJumps out;
  std::size_t seen = 0;
  for (long m = 0; m <= top; ++m) {
    if (!S.contains(m)) continue;
    const std::size_t j = seen++;
    // Monomials of degree exactly m (at most one when degrees are distinct).
    const MonomialBasis b = module_basis(R.shape(), m + 1);
    std::vector<std::size_t> next;
    for (std::size_t g : kernel) {
      bool fixes = true;
      for (const auto& mono : b.monomials) {
        if (mono.degree != m) continue;
        const TowerElement x = TowerElement::monomial(mono.exps, R.field().one());
        if (!(A.apply(g, x) == x)) {
          fixes = false;
          break;
        }
      }
      if (fixes) next.push_back(g);
    }
    if (next.size() < kernel.size() && !out.levels.empty()) {
      out.jumps.push_back(out.levels.back().j);
      out.generator_poles.push_back(m);
    }
    kernel = std::move(next);
    out.levels.push_back({j, m, kernel.size()});
    if (kernel.size() == 1) break;
  }
  std::vector<long> expected(R.spec().poles.begin() + 1, R.spec().poles.end());
  std::sort(expected.begin(), expected.end());
  out.consistent = out.generator_poles == expected;
  return out;
}

// ---------------------------------------------------------------------------
// Order of a cyclic action.

struct CyclicOrderReport {
  bool pass = false;
  std::size_t generator = 0;
  std::vector<bool> norm_nonzero;  // entry nu: (1 + s + ... + s^{p^nu - 1}) C_s(s) != 0
};

inline CyclicOrderReport cyclic_order_check(const TowerAction& A, int h) {
  const FiniteGroup& G = A.group();
  const TowerRing& R = A.ring();
  const auto gen = G.cyclic_generator();
  require(gen.has_value(), errc::not_cyclic, "group is not cyclic");
  std::size_t order = 1;
  for (int i = 0; i < h; ++i) order *= R.field().p();
  require(G.order() == order, errc::bad_order, "group order is not p^h");
  require(R.s() >= 1, errc::shape_error, "tower has no wild step");
  CyclicOrderReport rep;
  rep.generator = G.kind() == FiniteGroup::Kind::cyclic ? 1 : *gen;
  if (G.order() == 1) {
    rep.pass = true;
    return rep;
  }
  const TowerElement c = A.cocycle(static_cast<std::size_t>(R.s()), rep.generator);
  TowerElement sum = R.zero();
  std::size_t power = 0, elem = 0, limit = 1;
  rep.pass = true;
  for (int nu = 0; nu < h; ++nu) {
    for (; power < limit; ++power) {
      sum = R.add(sum, A.apply(elem, c));
      elem = G.mul(elem, rep.generator);
    }
    rep.norm_nonzero.push_back(!sum.is_zero());
    rep.pass = rep.pass && !sum.is_zero();
    limit *= R.field().p();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// F_p-linear coordinates on bounded modules.

class ModuleCoords {
 public:
  ModuleCoords(const TowerRing& R, MonomialBasis basis) : R_(&R), basis_(std::move(basis)) {
    for (std::size_t i = 0; i < basis_.monomials.size(); ++i) index_.emplace(basis_.monomials[i].exps, i);
  }

  const MonomialBasis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.monomials.size() * R_->field().k(); }

  Vec coords(const TowerElement& x) const {
    const Field& F = R_->field();
    Vec v(dim(), 0);
    for (const auto& [e, c] : x.terms()) {
      auto it = index_.find(e);
      require(it != index_.end(), errc::degree_overflow, "element leaves the module of degree < " +
                                                             std::to_string(basis_.bound));
      for (std::uint32_t d = 0; d < F.k(); ++d) v[it->second * F.k() + d] = F.coeff(c, d);
    }
    return v;
  }

  TowerElement element(const Vec& v) const {
    const Field& F = R_->field();
    TowerElement x = R_->zero();
    std::vector<std::uint32_t> digits(F.k());
    for (std::size_t i = 0; i < basis_.monomials.size(); ++i) {
      for (std::uint32_t d = 0; d < F.k(); ++d) digits[d] = v[i * F.k() + d];
      x.add_term(F, basis_.monomials[i].exps, F.from_coeffs(digits));
    }
    return x;
  }

  /// F_p matrix of an F_p-linear map defined on monomials times F_q scalars.
  template <class Map>
  Matrix matrix_of(const ModuleCoords& target, Map&& f) const {
    const Field& F = R_->field();
    Matrix m(F.p(), target.dim(), dim());
    for (std::size_t i = 0; i < basis_.monomials.size(); ++i)
      for (std::uint32_t d = 0; d < F.k(); ++d) {
        const TowerElement x = TowerElement::monomial(basis_.monomials[i].exps, F.basis_element(d));
        const Vec col = target.coords(f(x));
        for (std::size_t r = 0; r < col.size(); ++r) m(r, i * F.k() + d) = col[r];
      }
    return m;
  }

 private:
  const TowerRing* R_;
  MonomialBasis basis_;
  std::map<Exps, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Solver for the next step of a tower.

struct CocycleSolution {
  std::vector<TowerElement> gen_values;  // C(g) for the group's generators
  TowerElement D;
};

struct SolveResult {
  bool consistent = false;
  AdditivePolynomial P;
  std::vector<std::size_t> bottom_generators;
  std::vector<Fq> bottom_values;
  MonomialBasis cocycle_basis, d_basis;
  std::size_t unknowns = 0, equations = 0, rank = 0;
  CocycleSolution particular;
  std::vector<CocycleSolution> homogeneous;
};

/// Solves for the cocycle C of a new step f with pole order m_bar and
/// P(f) = D, given the action on the tower so far.
///
/// Unknowns are the F_p coordinates of C(g) on the group generators (in the
/// module of degree < m_bar) and of D (degree <= p^n m_bar). The equations
/// say that C extends consistently along every edge of the Cayley graph,
/// takes the prescribed constant values on generators of the subgroup fixing
/// the prefix, and satisfies P(C(g)) = (g - 1) D on generators.
inline SolveResult solve_compatible_cocycles(const TowerAction& prefix, long m_bar, int n,
                                             std::optional<std::vector<Fq>> bottom = std::nullopt) {
  const TowerRing& R = prefix.ring();
  const Field& F = R.field();
  const FiniteGroup& G = prefix.group();
  const std::uint32_t p = F.p();
  require(m_bar > 0 && n >= 1, errc::shape_error, "pole order and rank must be positive");
  long pn = 1;
  for (int j = 0; j < n; ++j) pn *= p;

  SolveResult res;
  std::vector<std::size_t> H;
  for (std::size_t g = 0; g < G.order(); ++g)
    if (prefix.fixes_below(g, R.width())) H.push_back(g);
  res.bottom_generators = G.greedy_generators(H);
  const std::size_t rH = res.bottom_generators.size();
  require(rH >= static_cast<std::size_t>(n), errc::shape_error,
          "subgroup fixing the tower has rank " + std::to_string(rH) + " < " + std::to_string(n));
  if (bottom) {
    require(bottom->size() == rH, errc::shape_error, "one bottom value per subgroup generator is required");
    res.bottom_values = *bottom;
  } else {
    require(static_cast<std::uint32_t>(n) <= F.k(), errc::shape_error,
            "default bottom values need n <= k; supply them explicitly");
    for (std::size_t j = 0; j < rH; ++j)
      res.bottom_values.push_back(j < static_cast<std::size_t>(n) ? F.basis_element(static_cast<std::uint32_t>(j)) : F.zero());
  }
  std::vector<Fq> W;
  for (Fq w : res.bottom_values)
    if (w != F.zero()) W.push_back(w);
  require(W.size() == static_cast<std::size_t>(n), errc::shape_error,
          "bottom values must contain exactly n nonzero entries");
  res.P = additive_from_span(F, W);

  const ModuleCoords Mc(R, module_basis(R.shape(), m_bar));
  const ModuleCoords Md(R, module_basis(R.shape(), pn * m_bar + 1));
  res.cocycle_basis = Mc.basis();
  res.d_basis = Md.basis();
  const std::size_t dc = Mc.dim(), dd = Md.dim();
  const std::size_t r = G.generators().size();
  const std::size_t U = r * dc + dd;
  res.unknowns = U;

  std::vector<Matrix> act_c(G.order());
  for (std::size_t g = 0; g < G.order(); ++g)
    act_c[g] = Mc.matrix_of(Mc, [&](const TowerElement& x) { return prefix.apply(g, x); });

  // Affine expressions C(x) = E_x [u; 1].
  std::vector<Matrix> E(G.order(), Matrix(p, dc, U + 1));
  auto selector = [&](std::size_t gi) {
    Matrix S(p, dc, U + 1);
    for (std::size_t a = 0; a < dc; ++a) S(a, gi * dc + a) = 1;
    return S;
  };
  for (std::size_t idx = 1; idx < G.bfs_order().size(); ++idx) {
    const std::size_t y = G.bfs_order()[idx];
    const auto& e = G.tree()[y];
    E[y] = E[e.parent] + act_c[e.parent] * selector(e.gen);
  }

  std::vector<std::vector<std::uint32_t>> rows;
  auto push_rows = [&](const Matrix& M) {
    for (std::size_t i = 0; i < M.rows(); ++i) {
      std::vector<std::uint32_t> row(U + 1);
      for (std::size_t j = 0; j <= U; ++j) row[j] = M(i, j);
      if (std::any_of(row.begin(), row.end(), [](std::uint32_t v) { return v != 0; })) rows.push_back(std::move(row));
    }
  };
  for (std::size_t x = 0; x < G.order(); ++x)
    for (std::size_t gi = 0; gi < r; ++gi) {
      const std::size_t y = G.mul(x, G.generators()[gi]);
      push_rows(E[x] + act_c[x] * selector(gi) - E[y]);
    }
  for (std::size_t j = 0; j < rH; ++j) {
    Matrix M = E[res.bottom_generators[j]];
    const Vec w = Mc.coords(R.constant(res.bottom_values[j]));
    for (std::size_t a = 0; a < dc; ++a) M(a, U) = (M(a, U) + p - w[a]) % p;
    push_rows(M);
  }
  const Matrix Pmat = Mc.matrix_of(Md, [&](const TowerElement& x) { return R.additive_eval(res.P, x); });
  for (std::size_t gi = 0; gi < r; ++gi) {
    const std::size_t g = G.generators()[gi];
    const Matrix Ad = Md.matrix_of(Md, [&](const TowerElement& x) { return R.sub(prefix.apply(g, x), x); });
    Matrix M(p, dd, U + 1);
    for (std::size_t a = 0; a < dd; ++a) {
      for (std::size_t b = 0; b < dc; ++b) M(a, gi * dc + b) = Pmat(a, b);
      for (std::size_t b = 0; b < dd; ++b) M(a, r * dc + b) = (p - Ad(a, b)) % p;
    }
    push_rows(M);
  }

  // Rows encode A u + c = 0.
  Matrix A(p, rows.size(), U);
  Vec rhs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < U; ++j) A(i, j) = rows[i][j];
    rhs[i] = (p - rows[i][U]) % p;
  }
  res.equations = rows.size();
  res.rank = rank(A);
  const auto x = solve(A, rhs);
  if (!x) return res;
  res.consistent = true;
  auto unpack = [&](const Vec& u) {
    CocycleSolution sol;
    for (std::size_t gi = 0; gi < r; ++gi)
      sol.gen_values.push_back(Mc.element(Vec(u.begin() + static_cast<long>(gi * dc), u.begin() + static_cast<long>((gi + 1) * dc))));
    sol.D = Md.element(Vec(u.begin() + static_cast<long>(r * dc), u.end()));
    return sol;
  };
  res.particular = unpack(*x);
  for (const auto& v : kernel(A)) res.homogeneous.push_back(unpack(v));
  return res;
}

/// Picks a member of the solution family whose D has exact pole order
/// p^n m_bar and appends the new step to the tower and its action.
inline TowerAction realize(const TowerAction& prefix, const SolveResult& res, long m_bar) {
  require(res.consistent, errc::shape_error, "empty solution set");
  const TowerRing& R = prefix.ring();
  const Field& F = R.field();
  const int n = res.P.n();
  long pn = 1;
  for (int j = 0; j < n; ++j) pn *= F.p();
  const Monomial* top = nullptr;
  for (const auto& mono : res.d_basis.monomials)
    if (mono.degree == pn * m_bar) top = &mono;
  require(top != nullptr, errc::shape_error, "no monomial of degree p^n * m_bar below the prefix poles");

  CocycleSolution sol = res.particular;
  if (sol.D.coeff(top->exps) == F.zero()) {
    bool found = false;
    for (const auto& h : res.homogeneous)
      if (h.D.coeff(top->exps) != F.zero()) {
        for (std::size_t gi = 0; gi < sol.gen_values.size(); ++gi)
          sol.gen_values[gi] = R.add(sol.gen_values[gi], h.gen_values[gi]);
        sol.D = R.add(sol.D, h.D);
        found = true;
        break;
      }
    require(found, errc::shape_error, "no solution gives D the required pole order");
  }

  const std::vector<TowerElement> table = extend_cocycle(prefix, sol.gen_values);
  const std::size_t w = R.width() + 1;
  TowerSpec spec = R.spec();
  spec.s += 1;
  spec.n.push_back(n);
  spec.poles.push_back(m_bar);
  spec.jumps.push_back(split_p(m_bar, F.p()).second);
  for (auto& rel : spec.relations) rel.D = rel.D.widened(w);
  spec.relations.push_back({res.P, sol.D.widened(w)});
  GroupAction act = prefix.data();
  for (auto& tab : act.cocycles)
    for (auto& x : tab) x = x.widened(w);
  for (auto& x : act.cocycle0) x = x.widened(w);
  std::vector<TowerElement> wide;
  for (const auto& x : table) wide.push_back(x.widened(w));
  act.cocycles.push_back(std::move(wide));
  return TowerAction(TowerRing(spec), std::move(act));
}

/// A tower with no wild steps: the rational function field k(f_0), with the
/// group acting trivially.
inline TowerAction base_tower(const Field& F, long pole0, FiniteGroup G) {
  TowerSpec spec;
  spec.field = F;
  spec.s = 0;
  spec.poles = {pole0};
  return TowerAction(TowerRing(spec), GroupAction{std::move(G), {}, {}});
}

}  // namespace hkg

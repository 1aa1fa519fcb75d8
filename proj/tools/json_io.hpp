#pragma once

// JSON encodings for every library type the CLI reads or writes. Keys come
// out sorted (nlohmann's default object map) and every value is an integer.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "hkg/additive.hpp"
#include "hkg/cohomology.hpp"
#include "hkg/error.hpp"
#include "hkg/field.hpp"
#include "hkg/group.hpp"
#include "hkg/linalg.hpp"
#include "hkg/semigroup.hpp"
#include "hkg/series.hpp"
#include "hkg/tower.hpp"

namespace hkg::io {

using json = nlohmann::json;

namespace detail {

inline const json& at(const json& j, const char* key) {
  require(j.is_object(), errc::invalid_argument, std::string("expected an object with key \"") + key + "\"");
  auto it = j.find(key);
  require(it != j.end(), errc::invalid_argument, std::string("missing key \"") + key + "\"");
  return *it;
}

inline long integer(const json& j, const char* what) {
  require(j.is_number_integer(), errc::invalid_argument, std::string(what) + " must be an integer");
  return j.get<long>();
}

template <class T = long>
std::vector<T> int_list(const json& j, const char* what) {
  require(j.is_array(), errc::invalid_argument, std::string(what) + " must be an array");
  std::vector<T> out;
  for (const auto& x : j) out.push_back(static_cast<T>(integer(x, what)));
  return out;
}

}  // namespace detail

inline Field field_from_json(const json& j) {
  const long p = detail::integer(detail::at(j, "p"), "p");
  const long k = j.contains("k") ? detail::integer(j.at("k"), "k") : 1;
  require(p > 0 && k > 0, errc::invalid_field, "p and k must be positive");
  return Field::make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k));
}

inline json field_to_json(const Field& F) { return {{"p", F.p()}, {"k", F.k()}}; }

// FieldElement: k integers, coefficient i of theta^i. A bare integer is read
// as an element of the prime field.
inline json fe_to_json(const Field& F, Fq a) { return F.coeffs(a); }

inline Fq fe_from_json(const Field& F, const json& j) {
  if (j.is_number_integer()) return F.from_int(j.get<long>());
  const auto c = detail::int_list<long>(j, "field element");
  require(c.size() == F.k(), errc::invalid_field, "field element needs " + std::to_string(F.k()) + " coefficients");
  std::vector<std::uint32_t> d;
  for (long x : c) {
    require(x >= 0 && x < static_cast<long>(F.p()), errc::invalid_field, "field element digit out of range");
    d.push_back(static_cast<std::uint32_t>(x));
  }
  return F.from_coeffs(d);
}

inline json series_to_json(const LaurentSeries& s) {
  json c = json::array();
  for (Fq x : s.coeffs()) c.push_back(fe_to_json(s.field(), x));
  return {{"p", s.field().p()}, {"k", s.field().k()}, {"val", s.valuation()}, {"prec", s.precision()}, {"coeffs", c}};
}

inline LaurentSeries series_from_json(const json& j) {
  const Field F = field_from_json(j);
  const long val = detail::integer(detail::at(j, "val"), "val");
  const long prec = detail::integer(detail::at(j, "prec"), "prec");
  const json& cj = detail::at(j, "coeffs");
  require(cj.is_array(), errc::invalid_argument, "coeffs must be an array");
  std::vector<Fq> c;
  for (const auto& x : cj) c.push_back(fe_from_json(F, x));
  require(val + static_cast<long>(c.size()) <= prec, errc::invalid_argument, "coefficients run past prec");
  return LaurentSeries::from_coeffs(F, static_cast<int>(val), std::move(c), static_cast<int>(prec));
}

inline json semigroup_to_json(const NumericalSemigroup& S) { return {{"p", S.p()}, {"generators", S.generators()}}; }

inline NumericalSemigroup semigroup_from_json(const json& j) {
  return NumericalSemigroup(static_cast<std::uint32_t>(detail::integer(detail::at(j, "p"), "p")),
                            detail::int_list(detail::at(j, "generators"), "generators"));
}

inline json basis_to_json(const MonomialBasis& B) {
  json out = json::array();
  for (const auto& m : B.monomials) out.push_back({{"exps", m.exps}, {"degree", m.degree}});
  return out;
}

// Additive polynomial: coeffs[i] is the coefficient of X^{p^i}.
inline json additive_to_json(const AdditivePolynomial& P) {
  json c = json::array();
  for (Fq x : P.coeffs()) c.push_back(fe_to_json(P.field(), x));
  return {{"p", P.p()}, {"k", P.field().k()}, {"n", P.n()}, {"coeffs", c}};
}

/// The field comes from `F` when given (inside a tower file), else from the
/// object's own p and k (k defaulting to the coefficient width).
inline AdditivePolynomial additive_from_json(const json& j, const Field* F = nullptr) {
  Field own;
  if (!F) {
    long k = 1;
    if (j.contains("k")) {
      k = detail::integer(j.at("k"), "k");
    } else if (j.contains("coeffs") && j.at("coeffs").is_array() && !j.at("coeffs").empty() &&
               j.at("coeffs").front().is_array()) {
      k = static_cast<long>(j.at("coeffs").front().size());
    }
    own = Field::make(static_cast<std::uint32_t>(detail::integer(detail::at(j, "p"), "p")),
                      static_cast<std::uint32_t>(k));
    F = &own;
  } else if (j.contains("p")) {
    require(detail::integer(j.at("p"), "p") == F->p(), errc::field_mismatch, "additive polynomial over another field");
  }
  std::vector<Fq> c;
  const json& cj = detail::at(j, "coeffs");
  require(cj.is_array(), errc::invalid_argument, "coeffs must be an array");
  for (const auto& x : cj) c.push_back(fe_from_json(*F, x));
  if (j.contains("n"))
    require(detail::integer(j.at("n"), "n") + 1 == static_cast<long>(c.size()), errc::shape_error,
            "n does not match the number of coefficients");
  return AdditivePolynomial(*F, std::move(c));
}

inline json element_to_json(const Field& F, const TowerElement& x) {
  json out = json::array();
  for (const auto& [e, c] : x.terms()) out.push_back({{"exps", e}, {"coeff", fe_to_json(F, c)}});
  return out;
}

inline TowerElement element_from_json(const Field& F, std::size_t width, const json& j) {
  require(j.is_array(), errc::invalid_argument, "tower element must be a list of terms");
  TowerElement x(width);
  for (const auto& t : j) {
    const auto e = detail::int_list<int>(detail::at(t, "exps"), "exps");
    require(e.size() == width, errc::shape_error, "exponent vector has the wrong length");
    for (int a : e) require(a >= 0, errc::shape_error, "exponents must be nonnegative");
    x.add_term(F, e, fe_from_json(F, detail::at(t, "coeff")));
  }
  return x;
}

inline json tower_to_json(const TowerSpec& s) {
  json rel = json::array();
  for (const auto& r : s.relations)
    rel.push_back({{"P", additive_to_json(r.P)}, {"D", element_to_json(s.field, r.D)}});
  return {{"field", field_to_json(s.field)}, {"s", s.s},          {"n", s.n},
          {"poles", s.poles},                {"jumps", s.jumps}, {"relations", rel}};
}

inline TowerSpec tower_from_json(const json& j) {
  TowerSpec s;
  s.field = field_from_json(detail::at(j, "field"));
  s.s = static_cast<int>(detail::integer(detail::at(j, "s"), "s"));
  require(s.s >= 0, errc::shape_error, "s must be nonnegative");
  s.n = detail::int_list<int>(detail::at(j, "n"), "n");
  s.poles = detail::int_list(detail::at(j, "poles"), "poles");
  s.jumps = detail::int_list(detail::at(j, "jumps"), "jumps");
  const json& rel = detail::at(j, "relations");
  require(rel.is_array(), errc::invalid_argument, "relations must be an array");
  for (const auto& r : rel)
    s.relations.push_back({additive_from_json(detail::at(r, "P"), &s.field),
                           element_from_json(s.field, s.width(), detail::at(r, "D"))});
  return s;
}

inline json group_to_json(const FiniteGroup& G, std::uint32_t p) {
  switch (G.kind()) {
    case FiniteGroup::Kind::cyclic:
      return {{"kind", "cyclic"}, {"order", G.order()}};
    case FiniteGroup::Kind::elem_abelian: {
      int r = 0;
      for (std::size_t n = 1; n < G.order(); n *= p) ++r;
      return {{"kind", "elem_abelian"}, {"p", p}, {"rank", r}};
    }
    case FiniteGroup::Kind::table:
      break;
  }
  return {{"kind", "table"}, {"table", G.table()}, {"generators", G.generators()}};
}

inline FiniteGroup group_from_json(const json& j) {
  const json& kind = detail::at(j, "kind");
  require(kind.is_string(), errc::invalid_argument, "group kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "cyclic") {
    const long n = detail::integer(detail::at(j, "order"), "order");
    require(n >= 1, errc::not_a_group, "group order must be positive");
    return FiniteGroup::cyclic(static_cast<std::size_t>(n));
  }
  if (k == "elem_abelian") {
    const long p = detail::integer(detail::at(j, "p"), "p");
    require(p >= 2, errc::not_a_group, "p must be at least 2");
    return FiniteGroup::elem_abelian(static_cast<std::uint32_t>(p),
                                     static_cast<int>(detail::integer(detail::at(j, "rank"), "rank")));
  }
  if (k == "table") {
    const json& t = detail::at(j, "table");
    require(t.is_array(), errc::not_a_group, "table must be an array of rows");
    std::vector<std::vector<std::size_t>> mul;
    for (const auto& row : t) {
      const auto r = detail::int_list(row, "table entry");
      for (long x : r) require(x >= 0, errc::not_a_group, "table entry out of range");
      mul.emplace_back(r.begin(), r.end());
    }
    const auto g = detail::int_list(detail::at(j, "generators"), "generators");
    for (long x : g) require(x >= 0, errc::not_a_group, "generator out of range");
    return FiniteGroup::from_table(std::move(mul), {g.begin(), g.end()});
  }
  fail(errc::invalid_argument, "unknown group kind \"" + k + "\"");
}

namespace detail {

inline json table_to_json(const Field& F, const std::vector<TowerElement>& tab) {
  json out = json::object();
  for (std::size_t g = 0; g < tab.size(); ++g)
    if (!tab[g].is_zero()) out[std::to_string(g)] = element_to_json(F, tab[g]);
  return out;
}

// Missing entries are zero; keys are group element indices.
inline std::vector<TowerElement> table_from_json(const TowerRing& R, std::size_t order, const json& j) {
  require(j.is_object(), errc::invalid_argument, "cocycle table must be an object keyed by element index");
  std::vector<TowerElement> tab(order, R.zero());
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::size_t pos = 0;
    long g = -1;
    try {
      g = std::stol(it.key(), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    require(pos == it.key().size() && g >= 0 && g < static_cast<long>(order), errc::invalid_argument,
            "bad group element index \"" + it.key() + "\"");
    tab[static_cast<std::size_t>(g)] = R.reduce(element_from_json(R.field(), R.width(), it.value()));
  }
  return tab;
}

}  // namespace detail

inline json action_to_json(const TowerAction& A) {
  const Field& F = A.ring().field();
  json c = json::array();
  for (const auto& tab : A.data().cocycles) c.push_back(detail::table_to_json(F, tab));
  json out = {{"group", group_to_json(A.group(), F.p())}, {"cocycles", c}};
  if (!A.data().cocycle0.empty()) out["cocycle0"] = detail::table_to_json(F, A.data().cocycle0);
  return out;
}

inline TowerAction action_from_json(const TowerRing& R, const json& j) {
  GroupAction a;
  a.group = group_from_json(detail::at(j, "group"));
  const json& c = detail::at(j, "cocycles");
  require(c.is_array(), errc::invalid_argument, "cocycles must be an array");
  for (const auto& tab : c) a.cocycles.push_back(detail::table_from_json(R, a.group.order(), tab));
  if (j.contains("cocycle0")) a.cocycle0 = detail::table_from_json(R, a.group.order(), j.at("cocycle0"));
  return TowerAction(R, std::move(a));
}

inline json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(r);
  }
  return rows;
}

inline Matrix matrix_from_json(std::uint32_t p, const json& j) {
  require(j.is_array(), errc::invalid_argument, "matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.front().size() : 0;
  Matrix M(p, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto r = detail::int_list(j[i], "matrix entry");
    require(r.size() == cols, errc::shape_error, "matrix rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) M(i, c) = static_cast<std::uint32_t>(mod_floor(r[c], p));
  }
  return M;
}

inline json vec_to_json(const Vec& v) { return v; }

inline Vec vec_from_json(std::uint32_t p, const json& j) {
  Vec v;
  for (long x : detail::int_list(j, "vector entry")) v.push_back(static_cast<std::uint32_t>(mod_floor(x, p)));
  return v;
}

/// Module file: {"p":…, "group":…, "generators":[matrix,…]}.
inline LinearizedModule module_from_json(const json& j) {
  const auto p = static_cast<std::uint32_t>(detail::integer(detail::at(j, "p"), "p"));
  require(is_prime(p), errc::invalid_field, "p must be prime");
  const FiniteGroup G = group_from_json(detail::at(j, "group"));
  std::vector<Matrix> gens;
  for (const auto& m : detail::at(j, "generators")) gens.push_back(matrix_from_json(p, m));
  for (const auto& m : gens)
    require(m.rows() == m.cols() && m.rows() == gens.front().rows(), errc::shape_error,
            "generator matrices must be square of one size");
  return module_from_generators(G, p, gens);
}

}  // namespace hkg::io

// hkg: command-line front end. Every result is one canonical JSON document on
// stdout; failures go to stderr as {"error": Name, "message": ...}.
//
// Exit codes: 0 success or verification passed, 1 verification failed,
// 2 usage or validation error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hkg/acceptance.hpp"
#include "hkg/additive.hpp"
#include "hkg/cohomology.hpp"
#include "hkg/covers.hpp"
#include "hkg/nottingham.hpp"
#include "hkg/semigroup.hpp"
#include "hkg/series.hpp"
#include "hkg/tower.hpp"
#include "json_io.hpp"

namespace {

using hkg::io::json;

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

int default_precision(int fallback) {
  if (const char* env = std::getenv("HKG_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < (1 << 20)) return static_cast<int>(v);
    hkg::fail(hkg::errc::invalid_argument, "HKG_PRECISION must be a positive integer");
  }
  return fallback;
}

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    hkg::require(static_cast<bool>(in), hkg::errc::invalid_argument, "cannot read " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    hkg::fail(hkg::errc::invalid_argument, path + ": " + e.what());
  }
}

json parse_inline(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    hkg::fail(hkg::errc::invalid_argument, std::string(what) + " is not valid JSON");
  }
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    hkg::require(pos == item.size() && !item.empty(), hkg::errc::invalid_argument, "bad integer list \"" + text + "\"");
    out.push_back(v);
  }
  return out;
}

hkg::Field make_field(long p, long k) {
  hkg::require(p > 0 && k > 0, hkg::errc::invalid_field, "p and k must be positive");
  return hkg::Field::make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k));
}

struct Output {
  std::string path;
  void emit(const json& j) const {
    if (path.empty() || path == "-") {
      std::cout << j.dump() << "\n";
    } else {
      std::ofstream out(path);
      hkg::require(static_cast<bool>(out), hkg::errc::invalid_argument, "cannot write " + path);
      out << j.dump() << "\n";
    }
  }
};

json compat_to_json(const hkg::Field& F, const hkg::CompatReport& r) {
  json j = {{"pass", r.pass}};
  if (!r.pass) {
    j["check"] = r.check;
    j["level"] = r.level;
    j["sigma"] = r.sigma;
    j["tau"] = r.tau;
    j["lhs"] = hkg::io::element_to_json(F, r.lhs);
    j["rhs"] = hkg::io::element_to_json(F, r.rhs);
    j["detail"] = r.detail;
  }
  return j;
}

json solution_to_json(const hkg::Field& F, const hkg::CocycleSolution& s) {
  json g = json::array();
  for (const auto& x : s.gen_values) g.push_back(hkg::io::element_to_json(F, x));
  return {{"generator_values", g}, {"D", hkg::io::element_to_json(F, s.D)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nottingham elements, Artin-Schreier towers and their cocycles over finite fields"};
  app.require_subcommand(1);
  Output output;
  app.add_option("-o,--out", output.path, "Write the JSON result here instead of stdout");

  int status = kOk;
  std::function<void()> action;

  // Shared option storage.
  long p = 0, k = 1, m = 0, max_h = 3, level = 1, n_rank = 1, m_bar = 0, group_elem = 1, h_order = 0;
  int prec = 0;
  std::string c_text = "1", w_text, gens_text, poles_text, n_text, file_a, file_b, tower_path, action_path,
              module_path, cocycle_path, lambda_text, a_text, bottom_text, expansions_path, member_text;
  bool full = false, realize = false, timing = false, as_json = false;
  std::uint64_t seed = hkg::acceptance::default_seed;

  // phi
  auto* phi = app.add_subcommand("phi", "Build t (1 + C t^m)^{-1/m}");
  phi->add_option("--p", p, "Characteristic")->required();
  phi->add_option("--k", k, "Degree of F_q over F_p");
  phi->add_option("--m", m, "Conductor exponent, prime to p")->required();
  phi->add_option("--c", c_text, "Constant C as a field element (JSON integer or digit array)");
  phi->add_option("--cbar", file_a, "Series file for a non-constant C");
  phi->add_option("--prec", prec, "Output precision");
  phi->callback([&] {
    action = [&] {
      const int N = prec ? prec : default_precision(hkg::NottinghamElement::default_precision);
      if (!file_a.empty()) {
        const auto cbar = hkg::io::series_from_json(read_json(file_a));
        output.emit(hkg::io::series_to_json(hkg::build_phi(cbar, m, N).series()));
        return;
      }
      const hkg::Field F = make_field(p, k);
      const hkg::Fq c = hkg::io::fe_from_json(F, parse_inline(c_text, "--c"));
      output.emit(hkg::io::series_to_json(hkg::build_phi(F, c, m, N).series()));
    };
  });

  auto* comp = app.add_subcommand("compose", "Series composition f(g(t))");
  comp->add_option("f", file_a, "Series file for f")->required();
  comp->add_option("g", file_b, "Series file for g")->required();
  comp->callback([&] {
    action = [&] {
      const auto f = hkg::io::series_from_json(read_json(file_a));
      const auto g = hkg::io::series_from_json(read_json(file_b));
      output.emit(hkg::io::series_to_json(hkg::compose(f, g)));
    };
  });

  auto* inv = app.add_subcommand("invert", "Inverse in the Nottingham group");
  inv->add_option("series", file_a, "Series file")->required();
  inv->callback([&] {
    action = [&] {
      const hkg::NottinghamElement s(hkg::io::series_from_json(read_json(file_a)));
      output.emit(hkg::io::series_to_json(hkg::nott_inverse(s).series()));
    };
  });

  auto* ord = app.add_subcommand("order", "Order of a Nottingham element, qualified by precision");
  ord->add_option("series", file_a, "Series file")->required();
  ord->add_option("--max-h", max_h, "Largest exponent h tried for p^h");
  ord->callback([&] {
    action = [&] {
      const hkg::NottinghamElement s(hkg::io::series_from_json(read_json(file_a)));
      const auto r = hkg::nott_order(s, static_cast<int>(max_h));
      output.emit({{"determined", r.determined},
                   {"order", r.order},
                   {"h", r.h},
                   {"precision", r.precision},
                   {"reason", r.reason}});
      if (!r.determined) status = kFailed;
    };
  });

  auto* brk = app.add_subcommand("break", "Lower ramification break v(s(t) - t) - 1");
  brk->add_option("series", file_a, "Series file")->required();
  brk->callback([&] {
    action = [&] {
      const hkg::NottinghamElement s(hkg::io::series_from_json(read_json(file_a)));
      output.emit({{"break", hkg::ramification_break(s)}, {"precision", s.precision()}});
    };
  });

  auto* conj = app.add_subcommand("conjugate", "phi o s o phi^{-1}");
  conj->add_option("series", file_a, "Series file for s")->required();
  conj->add_option("phi", file_b, "Series file for the uniformizer change")->required();
  conj->callback([&] {
    action = [&] {
      const hkg::NottinghamElement s(hkg::io::series_from_json(read_json(file_a)));
      const auto ph = hkg::io::series_from_json(read_json(file_b));
      output.emit(hkg::io::series_to_json(hkg::conjugate(s, ph).series()));
    };
  });

  auto* sg = app.add_subcommand("semigroup", "Gaps and the first pole number prime to p");
  sg->add_option("--p", p, "Characteristic")->required();
  sg->add_option("--gens", gens_text, "Comma-separated generators")->required();
  sg->add_option("--member", member_text, "Also test membership of this integer");
  sg->add_flag("--full", full, "Also list gaps, Frobenius number and minimal generators");
  sg->callback([&] {
    action = [&] {
      const hkg::NumericalSemigroup S(static_cast<std::uint32_t>(p), parse_list(gens_text));
      const auto ft = S.first_prime_to_p();
      const auto gaps = S.gaps();
      json j = {{"gaps", gaps.size()}, {"m_r", ft.m}, {"r", ft.r}};
      if (full) {
        j["gap_list"] = gaps;
        j["frobenius"] = S.frobenius();
        j["minimal_generators"] = S.minimal_generators();
        j["m_r_is_last_generator"] = ft.is_last_generator;
        j["semigroup"] = hkg::io::semigroup_to_json(S);
      }
      if (!member_text.empty()) {
        const auto xs = parse_list(member_text);
        hkg::require(xs.size() == 1 && xs[0] >= 0, hkg::errc::invalid_argument, "--member takes one integer >= 0");
        const auto w = S.witness(xs[0]);
        j["member"] = {{"x", xs[0]}, {"contains", w.has_value()}};
        if (w) j["member"]["witness"] = *w;
      }
      output.emit(j);
    };
  });

  auto* mb = app.add_subcommand("module-basis", "Monomials of degree < m in the bounded module");
  mb->add_option("--tower", tower_path, "Tower file giving the shape");
  mb->add_option("--p", p, "Characteristic (without --tower)");
  mb->add_option("--n", n_text, "Comma-separated n_1..n_s (without --tower)");
  mb->add_option("--poles", poles_text, "Comma-separated m_0..m_s (without --tower)");
  mb->add_option("--m", m, "Degree bound")->required();
  mb->callback([&] {
    action = [&] {
      hkg::MonomialShape shape;
      if (!tower_path.empty()) {
        shape = hkg::io::tower_from_json(read_json(tower_path)).shape();
      } else {
        hkg::require(p > 0 && !poles_text.empty(), hkg::errc::invalid_argument, "need --tower or --p and --poles");
        shape.p = static_cast<std::uint32_t>(p);
        shape.poles = parse_list(poles_text);
        if (!n_text.empty())
          for (long v : parse_list(n_text)) shape.n.push_back(static_cast<int>(v));
        else
          shape.n.assign(shape.poles.size() - 1, 1);
      }
      const auto B = hkg::module_basis(shape, m);
      output.emit({{"bound", B.bound},
                   {"s", B.s},
                   {"dimension", B.monomials.size()},
                   {"degrees_distinct", B.degrees_distinct()},
                   {"monomials", hkg::io::basis_to_json(B)}});
    };
  });

  auto* add = app.add_subcommand("additive", "Additive polynomial with a given root space");
  add->require_subcommand(1);
  auto additive_cmd = [&](const char* name, bool moore) {
    auto* sub = add->add_subcommand(name, moore ? "Via the Moore determinant quotient" : "Via the span product");
    sub->add_option("--p", p, "Characteristic")->required();
    sub->add_option("--k", k, "Degree of F_q over F_p");
    sub->add_option("--w", w_text, "JSON array of field elements spanning the roots")->required();
    sub->callback([&, moore] {
      action = [&, moore] {
        const hkg::Field F = make_field(p, k);
        const json wj = parse_inline(w_text, "--w");
        hkg::require(wj.is_array(), hkg::errc::invalid_argument, "--w must be a JSON array");
        std::vector<hkg::Fq> w;
        for (const auto& x : wj) w.push_back(hkg::io::fe_from_json(F, x));
        const auto P = moore ? hkg::additive_from_moore(F, w) : hkg::additive_from_span(F, w);
        json j = hkg::io::additive_to_json(P);
        j["moore_det"] = hkg::io::fe_to_json(F, hkg::moore_det(F, w));
        output.emit(j);
      };
    });
  };
  additive_cmd("span", false);
  additive_cmd("moore", true);

  auto* tw = app.add_subcommand("tower", "Artin-Schreier towers with a group action");
  tw->require_subcommand(1);
  auto load_action = [&]() {
    const hkg::TowerRing R(hkg::io::tower_from_json(read_json(tower_path)));
    return hkg::io::action_from_json(R, read_json(action_path));
  };
  auto tower_io = [&](CLI::App* sub) {
    sub->add_option("--tower", tower_path, "Tower file")->required();
    sub->add_option("--action", action_path, "Action file")->required();
  };

  auto* tcheck = tw->add_subcommand("check", "Verify the cocycle and compatibility conditions");
  tower_io(tcheck);
  tcheck->add_option("--order", h_order, "Also check that a cyclic group of order p^h acts faithfully");
  tcheck->callback([&] {
    action = [&] {
      const auto A = load_action();
      const auto r = hkg::compat_check(A);
      json j = compat_to_json(A.ring().field(), r);
      bool ok = r.pass;
      if (h_order > 0) {
        const auto oc = hkg::cyclic_order_check(A, static_cast<int>(h_order));
        std::vector<int> nz(oc.norm_nonzero.begin(), oc.norm_nonzero.end());
        j["cyclic_order"] = {{"pass", oc.pass}, {"generator", oc.generator}, {"norm_nonzero", nz}};
        ok = ok && oc.pass;
      }
      output.emit(j);
      if (!ok) status = kFailed;
    };
  });

  auto* tres = tw->add_subcommand("rescale", "Replace f_i by lambda f_i + a");
  tower_io(tres);
  tres->add_option("--level", level, "Index i of the generator")->required();
  tres->add_option("--lambda", lambda_text, "Nonzero field element")->required();
  tres->add_option("--a", a_text, "Tower element (JSON term list) of degree below the pole of f_i");
  tres->callback([&] {
    action = [&] {
      const auto A = load_action();
      const hkg::Field& F = A.ring().field();
      const hkg::Fq lam = hkg::io::fe_from_json(F, parse_inline(lambda_text, "--lambda"));
      const hkg::TowerElement a = a_text.empty()
                                      ? A.ring().zero()
                                      : hkg::io::element_from_json(F, A.ring().width(), parse_inline(a_text, "--a"));
      const auto B = hkg::rescale_generator(A, static_cast<int>(level), lam, a);
      output.emit({{"tower", hkg::io::tower_to_json(B.ring().spec())}, {"action", hkg::io::action_to_json(B)}});
    };
  });

  auto* tsol = tw->add_subcommand("solve", "Cocycles and D for a new step with pole m_bar");
  tower_io(tsol);
  tsol->add_option("--m-bar", m_bar, "Pole order of the new generator")->required();
  tsol->add_option("--n", n_rank, "F_p-rank n of the new root space");
  tsol->add_option("--bottom", bottom_text, "JSON array of prescribed constant values on the fixing subgroup");
  tsol->add_flag("--realize", realize, "Also emit the extended tower and action");
  tsol->callback([&] {
    action = [&] {
      const auto A = load_action();
      const hkg::Field& F = A.ring().field();
      std::optional<std::vector<hkg::Fq>> bottom;
      if (!bottom_text.empty()) {
        const json bj = parse_inline(bottom_text, "--bottom");
        hkg::require(bj.is_array(), hkg::errc::invalid_argument, "--bottom must be a JSON array");
        bottom.emplace();
        for (const auto& x : bj) bottom->push_back(hkg::io::fe_from_json(F, x));
      }
      const auto res = hkg::solve_compatible_cocycles(A, m_bar, static_cast<int>(n_rank), bottom);
      json bv = json::array();
      for (auto x : res.bottom_values) bv.push_back(hkg::io::fe_to_json(F, x));
      json j = {{"consistent", res.consistent},
                {"unknowns", res.unknowns},
                {"equations", res.equations},
                {"rank", res.rank},
                {"bottom_generators", res.bottom_generators},
                {"bottom_values", bv}};
      if (res.consistent) {
        j["P"] = hkg::io::additive_to_json(res.P);
        j["particular"] = solution_to_json(F, res.particular);
        json hom = json::array();
        for (const auto& h : res.homogeneous) hom.push_back(solution_to_json(F, h));
        j["homogeneous"] = hom;
        if (realize) {
          const auto T = hkg::realize(A, res, m_bar);
          j["tower"] = hkg::io::tower_to_json(T.ring().spec());
          j["action"] = hkg::io::action_to_json(T);
        }
      }
      output.emit(j);
      if (!res.consistent) status = kFailed;
    };
  });

  auto* trep = tw->add_subcommand("rep-jumps", "Jumps of the representation filtration");
  tower_io(trep);
  trep->callback([&] {
    action = [&] {
      const auto r = hkg::representation_jumps(load_action());
      json lv = json::array();
      for (const auto& l : r.levels) lv.push_back({{"j", l.j}, {"m", l.m}, {"kernel", l.kernel}});
      output.emit({{"levels", lv},
                   {"jumps", r.jumps},
                   {"generator_poles", r.generator_poles},
                   {"consistent", r.consistent}});
      if (!r.consistent) status = kFailed;
    };
  });

  auto* coh = app.add_subcommand("cohomology", "Cocycles, coboundaries and H^1 of cyclic groups");
  coh->require_subcommand(1);
  auto* ch1 = coh->add_subcommand("h1", "dim ker N - rank(s - 1)");
  ch1->add_option("--module", module_path, "Module file {p, group, generators}")->required();
  ch1->callback([&] {
    action = [&] {
      const json mj = read_json(module_path);
      const auto M = hkg::io::module_from_json(mj);
      const auto gen = M.group.cyclic_generator();
      hkg::require(gen.has_value(), hkg::errc::not_cyclic, "group is not cyclic");
      int i = 0;
      for (std::size_t o = 1; o < M.group.order(); o *= M.p) ++i;
      std::size_t ord = 1;
      for (int t = 0; t < i; ++t) ord *= M.p;
      hkg::require(ord == M.group.order(), hkg::errc::bad_order, "group order is not a power of p");
      const auto r = hkg::h1_cyclic(M.action[*gen], i);
      output.emit({{"dim", r.dim},
                   {"dim_ker_norm", r.dim_ker_norm},
                   {"rank_sigma_minus_1", r.rank_sigma_minus_1},
                   {"h1", r.h1},
                   {"hypothesis", r.hypothesis},
                   {"norm_zero", r.norm_zero},
                   {"coinvariants", r.coinvariants}});
    };
  });
  auto* ccb = coh->add_subcommand("coboundary", "Decide whether a cocycle table is a coboundary");
  ccb->add_option("--module", module_path, "Module file {p, group, generators}")->required();
  ccb->add_option("--cocycle", cocycle_path, "JSON array with one vector per group element")->required();
  ccb->callback([&] {
    action = [&] {
      const auto M = hkg::io::module_from_json(read_json(module_path));
      const json cj = read_json(cocycle_path);
      hkg::require(cj.is_array(), hkg::errc::invalid_argument, "cocycle must be an array of vectors");
      hkg::CocycleTable C;
      for (const auto& v : cj) {
        C.push_back(hkg::io::vec_from_json(M.p, v));
        hkg::require(C.back().size() == M.dim, hkg::errc::shape_error, "cocycle value has the wrong dimension");
      }
      const auto chk = hkg::cocycle_check(M, C);
      if (!chk.ok) {
        output.emit({{"cocycle", false}, {"sigma", chk.sigma}, {"tau", chk.tau}});
        status = kFailed;
        return;
      }
      const auto b = hkg::coboundary_test(M, C);
      json j = {{"cocycle", true}, {"coboundary", b.has_value()}};
      if (b) j["b"] = *b;
      output.emit(j);
      if (!b) status = kFailed;
    };
  });

  auto* cov = app.add_subcommand("cover", "Local expansions of y^p - w^{p-1} y = x^m");
  cov->require_subcommand(1);
  auto* cexp = cov->add_subcommand("expand", "x and y in the canonical uniformizer");
  auto cover_opts = [&](CLI::App* sub) {
    sub->add_option("--p", p, "Characteristic")->required();
    sub->add_option("--k", k, "Degree of F_q over F_p");
    sub->add_option("--m", m, "Exponent, prime to p")->required();
    sub->add_option("--w", w_text, "Field element w (default 1)");
    sub->add_option("--prec", prec, "Precision");
  };
  auto build_cover = [&] {
    const hkg::Field F = make_field(p, k);
    std::optional<hkg::Fq> w;
    if (!w_text.empty()) w = hkg::io::fe_from_json(F, parse_inline(w_text, "--w"));
    return hkg::expand_as_cover(F, m, prec ? prec : default_precision(512), w);
  };
  cover_opts(cexp);
  cexp->callback([&] {
    action = [&] {
      const auto c = build_cover();
      output.emit({{"m", c.m},
                   {"w", hkg::io::fe_to_json(c.field, c.w)},
                   {"x", hkg::io::series_to_json(c.x)},
                   {"y", hkg::io::series_to_json(c.y)},
                   {"relation_ok", c.relation_ok}});
      if (!c.relation_ok) status = kFailed;
    };
  });
  auto* cver = cov->add_subcommand("verify", "Check that Phi_c transports the action");
  cover_opts(cver);
  cver->add_option("--c", c_text, "Constant c in F_p w");
  cver->callback([&] {
    action = [&] {
      const auto cv = build_cover();
      const hkg::Fq c = hkg::io::fe_from_json(cv.field, parse_inline(c_text, "--c"));
      const auto r = hkg::verify_action_transport(cv, c);
      output.emit({{"pass", r.pass},
                   {"c_in_span", r.c_in_span},
                   {"y_ok", r.y_ok},
                   {"x_ok", r.x_ok},
                   {"break_ok", r.break_ok},
                   {"lower_break", r.lower_break},
                   {"y_residual_val", r.y_residual_val},
                   {"x_residual_val", r.x_residual_val},
                   {"y_precision", r.y_precision},
                   {"x_precision", r.x_precision}});
      if (!r.pass) status = kFailed;
    };
  });
  auto* ctow = cov->add_subcommand("verify-tower", "Check supplied expansions of a deeper tower");
  tower_io(ctow);
  ctow->add_option("--expansions", expansions_path, "JSON array of series, one per generator")->required();
  ctow->add_option("--g", group_elem, "Group element index");
  ctow->add_option("--prec", prec, "Precision of the Nottingham element");
  ctow->callback([&] {
    action = [&] {
      const auto A = load_action();
      const json ej = read_json(expansions_path);
      hkg::require(ej.is_array(), hkg::errc::invalid_argument, "expansions must be an array of series");
      std::vector<hkg::LaurentSeries> f;
      for (const auto& s : ej) f.push_back(hkg::io::series_from_json(s));
      const auto ev = hkg::validate_expansions(A.ring(), f);
      json j = {{"expansions_ok", ev.pass}};
      if (!ev.pass) {
        j["failing_level"] = ev.failing_level;
        j["detail"] = ev.detail;
        output.emit(j);
        status = kFailed;
        return;
      }
      j["relation_precision"] = ev.precision;
      hkg::require(group_elem >= 0 && static_cast<std::size_t>(group_elem) < A.group().order(),
                   hkg::errc::invalid_argument, "--g is not a group element");
      int N = prec;
      if (!N) {
        N = ev.precision;
        for (const auto& s : f) N = std::min(N, s.precision());
      }
      const auto tr = hkg::verify_tower_transport(A, f, static_cast<std::size_t>(group_elem), N);
      j["pass"] = tr.pass;
      j["failing_level"] = tr.failing_level;
      j["transport_precision"] = tr.precision;
      output.emit(j);
      if (!tr.pass) status = kFailed;
    };
  });

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  self->add_option("--seed", seed, "Seed for the randomized checks");
  self->add_flag("--timing", timing, "Include wall-clock times");
  self->add_flag("--json", as_json, "Emit a JSON report instead of text lines");
  self->callback([&] {
    action = [&] {
      const auto results = hkg::acceptance::run_all(seed);
      bool ok = true;
      json rep = json::array();
      for (const auto& r : results) {
        ok = ok && r.pass;
        if (as_json) {
          json e = {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
          if (timing) e["ms"] = static_cast<long>(r.seconds * 1000);
          rep.push_back(e);
        } else {
          std::cout << hkg::acceptance::format(r, timing) << "\n";
        }
      }
      if (as_json) output.emit({{"seed", seed}, {"pass", ok}, {"criteria", rep}});
      if (!ok) status = kFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  }

  try {
    if (action) action();
  } catch (const hkg::error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(hkg::errc_name(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    std::cerr << json{{"error", hkg::errc_name(e.code())}, {"message", msg}}.dump() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  }
  return status;
}

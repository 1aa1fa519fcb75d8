#pragma once

// End-to-end acceptance checks, shared by the acceptance test binary and the
// CLI `selftest` subcommand. Every check is exact; the only randomness is a
// seeded mt19937_64.

#include <chrono>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hkg/additive.hpp"
#include "hkg/cohomology.hpp"
#include "hkg/covers.hpp"
#include "hkg/field.hpp"
#include "hkg/group.hpp"
#include "hkg/linalg.hpp"
#include "hkg/nottingham.hpp"
#include "hkg/series.hpp"
#include "hkg/tower.hpp"

namespace hkg::acceptance {

inline constexpr std::uint64_t default_seed = 20240611;

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;  // 0: no limit
};

namespace detail {

using Rng = std::mt19937_64;

inline std::uint64_t below(Rng& rng, std::uint64_t n) { return rng() % n; }

inline Fq random_elem(const Field& F, Rng& rng) { return F.from_index(static_cast<std::uint32_t>(below(rng, F.q()))); }

inline Fq random_nonzero(const Field& F, Rng& rng) {
  return F.from_index(static_cast<std::uint32_t>(1 + below(rng, F.q() - 1)));
}

inline const std::vector<long>& m_grid() {
  static const std::vector<long> g{2, 3, 4, 6, 8, 9, 11, 12, 13};
  return g;
}

// h with h^2 (1 + t^2) = 1 and h_0 = 1, each coefficient found by trying every
// element of F_5.
inline std::vector<std::uint32_t> worked_oracle(int terms) {
  const std::uint32_t p = 5;
  std::vector<std::uint32_t> h{1};
  auto coeff_of_product = [&](const std::vector<std::uint32_t>& hh, int n) {
    // [t^n] h^2 (1 + t^2)
    std::uint64_t s = 0;
    for (int e : {0, 2}) {
      const int r = n - e;
      if (r < 0) continue;
      for (int i = 0; i <= r; ++i)
        if (i < static_cast<int>(hh.size()) && r - i < static_cast<int>(hh.size())) s += hh[i] * hh[r - i];
    }
    return static_cast<std::uint32_t>(s % p);
  };
  for (int n = 1; n < terms; ++n) {
    int found = -1;
    for (std::uint32_t c = 0; c < p; ++c) {
      auto trial = h;
      trial.push_back(c);
      if (coeff_of_product(trial, n) == 0) {
        found = static_cast<int>(c);
        break;
      }
    }
    h.push_back(static_cast<std::uint32_t>(found));
  }
  return h;
}

// dim Z^1 - dim B^1 for a cyclic group acting through S, from the cocycle
// system on all elements: C(x s) = C(x) + x C(s), C(1) = 0.
inline std::size_t h1_oracle(const Matrix& S, std::size_t order) {
  const std::uint32_t p = S.p();
  const std::size_t n = S.rows();
  std::vector<Matrix> pw{Matrix::identity(p, n)};
  for (std::size_t l = 1; l < order; ++l) pw.push_back(pw.back() * S);
  Matrix Z(p, (order + 1) * n, order * n);
  for (std::size_t x = 0; x < order; ++x) {
    const std::size_t y = (x + 1) % order;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = x * n + i;
      Z(row, y * n + i) = (Z(row, y * n + i) + 1) % p;
      Z(row, x * n + i) = (Z(row, x * n + i) + p - 1) % p;
      for (std::size_t j = 0; j < n; ++j) Z(row, 1 * n + j) = (Z(row, 1 * n + j) + p - pw[x](i, j)) % p;
    }
  }
  for (std::size_t i = 0; i < n; ++i) Z(order * n + i, i) = 1;
  const std::size_t dimZ = order * n - rank(Z);
  Matrix B(p, order * n, n);
  for (std::size_t g = 0; g < order; ++g) {
    const Matrix D = pw[g] - Matrix::identity(p, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) B(g * n + i, j) = D(i, j);
  }
  return dimZ - rank(B);
}

// I + N with N strictly upper triangular; with `levels` > 0 the entries only
// link consecutive blocks, so N^levels = 0.
inline Matrix random_unipotent(std::uint32_t p, std::size_t n, int levels, Rng& rng) {
  Matrix S = Matrix::identity(p, n);
  std::vector<int> level(n);
  for (std::size_t i = 0; i < n; ++i) level[i] = levels > 0 ? static_cast<int>(i * levels / n) : static_cast<int>(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (level[j] == level[i] + 1 || (levels == 0)) S(i, j) = static_cast<std::uint32_t>(below(rng, p));
  return S;
}

inline Matrix cyclic_shift(std::uint32_t p, std::size_t n, std::size_t copies) {
  Matrix S(p, n * copies, n * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < n; ++i) S(c * n + (i + 1) % n, c * n + i) = 1;
  return S;
}

template <class Fn>
Result timed(int id, std::string name, double limit, Fn&& fn) {
  Result r;
  r.id = id;
  r.name = std::move(name);
  r.limit_seconds = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::ostringstream detail;
    r.pass = fn(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0 && r.seconds > limit) {
    r.pass = false;
    r.detail += " (over time limit)";
  }
  return r;
}

}  // namespace detail

/// 1. Phi_c o Phi_c' = Phi_{c+c'} mod t^256.
inline Result group_law(std::uint64_t seed) {
  return detail::timed(1, "group law Phi_c o Phi_c' = Phi_{c+c'}", 10, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 1);
    const int N = 256;
    std::size_t cases = 0;
    for (std::uint32_t p : {5u, 7u}) {
      const Field F = Field::make(p);
      for (long m : detail::m_grid()) {
        if (m % p == 0) continue;
        for (int trial = 0; trial < 20; ++trial) {
          const Fq c = detail::random_elem(F, rng), d = detail::random_elem(F, rng);
          const auto lhs = nott_mul(build_phi(F, c, m, N), build_phi(F, d, m, N));
          const auto rhs = build_phi(F, F.add(c, d), m, N);
          if (lhs.precision() < N || !agree(lhs.series(), rhs.series())) {
            out << "fails at p=" << p << " m=" << m << " c=" << c.v << " c'=" << d.v;
            return false;
          }
          ++cases;
        }
      }
    }
    out << cases << " pairs";
    return true;
  });
}

/// 2. nott_order(Phi_c) = p at precision 4pm, and Phi_c^j != id for 0 < j < p.
inline Result order_p(std::uint64_t) {
  return detail::timed(2, "order-p family", 30, [&](std::ostringstream& out) {
    std::size_t cases = 0;
    for (std::uint32_t p : {5u, 7u}) {
      const Field F = Field::make(p);
      for (long m : detail::m_grid()) {
        if (m % p == 0) continue;
        const int N = static_cast<int>(4 * p * m);
        for (std::uint32_t cv = 1; cv < p; ++cv) {
          const auto phi = build_phi(F, Fq{cv}, m, N);
          const auto rep = nott_order(phi, 3);
          if (!rep.determined || rep.order != p) {
            out << "p=" << p << " m=" << m << " c=" << cv << ": " << rep.reason;
            return false;
          }
          auto pw = phi;
          for (std::uint32_t j = 1; j < p; ++j) {
            if (pw.is_identity()) {
              out << "Phi^" << j << " is the identity at p=" << p << " m=" << m;
              return false;
            }
            pw = nott_mul(pw, phi);
          }
          ++cases;
        }
      }
    }
    out << cases << " elements of order p";
    return true;
  });
}

/// 3. p=5, m=2, c=1: Phi = t + 2t^3 + t^5 + O(t^7).
inline Result worked_expansion(std::uint64_t) {
  return detail::timed(3, "worked expansion p=5 m=2 c=1", 0, [&](std::ostringstream& out) {
    const Field F = Field::make(5);
    const auto phi = build_phi(F, F.one(), 2, 7);
    const auto h = detail::worked_oracle(6);
    const std::vector<std::uint32_t> expected{0, 1, 0, 2, 0, 1, 0};
    for (int e = 0; e < 7; ++e) {
      const std::uint32_t got = phi.series().coeff(e).v;
      const std::uint32_t oracle = e == 0 ? 0 : h[static_cast<std::size_t>(e - 1)];
      if (got != expected[static_cast<std::size_t>(e)] || got != oracle) {
        out << "coefficient of t^" << e << ": got " << got << ", oracle " << oracle;
        return false;
      }
    }
    out << "t + 2t^3 + t^5 + O(t^7)";
    return phi.precision() == 7;
  });
}

/// 4. break(Phi_c) = m; for Cbar of valuation v > 0, v(Phi(t) - t) = m + v + 1.
inline Result ramification(std::uint64_t seed) {
  return detail::timed(4, "ramification breaks", 0, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 4);
    std::size_t cases = 0;
    for (std::uint32_t p : {5u, 7u}) {
      const Field F = Field::make(p);
      for (long m : detail::m_grid()) {
        if (m % p == 0) continue;
        const int N = static_cast<int>(4 * p * m);
        for (std::uint32_t cv = 1; cv < p; ++cv)
          if (ramification_break(build_phi(F, Fq{cv}, m, N)) != m) {
            out << "break of Phi_" << cv << " at p=" << p << " m=" << m;
            return false;
          }
        for (int v = 1; v <= 3; ++v) {
          std::vector<Fq> c{detail::random_nonzero(F, rng)};
          for (int i = 1; i < N; ++i) c.push_back(detail::random_elem(F, rng));
          const LaurentSeries cbar = LaurentSeries::from_coeffs(F, v, c, v + N);
          const auto phi = build_phi(cbar, m, N);
          const LaurentSeries d = phi.series() - LaurentSeries::variable(F, N);
          if (d.valuation() != m + v + 1 || ramification_break(phi) + 1 != d.valuation()) {
            out << "v(Phi - t) = " << d.valuation() << " for v(Cbar)=" << v << " m=" << m;
            return false;
          }
          ++cases;
        }
      }
    }
    out << "grid breaks equal m; " << cases << " positive-valuation cases give m + v + 1";
    return true;
  });
}

/// 5. Span product equals Moore quotient; additivity; n = 1 closed form.
inline Result moore_identities(std::uint64_t seed) {
  return detail::timed(5, "Moore identities", 60, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 5);
    std::size_t tuples = 0;
    for (std::uint32_t p : {5u, 7u}) {
      for (int n = 1; n <= 3; ++n) {
        // n F_p-independent elements need k >= n.
        const Field F = Field::make(p, n <= 2 ? 2 : 3);
        for (int trial = 0; trial < 100;) {
          std::vector<Fq> w;
          for (int j = 0; j < n; ++j) w.push_back(detail::random_elem(F, rng));
          if (moore_det(F, w) == F.zero()) continue;
          ++trial;
          const auto a = additive_from_span(F, w);
          const auto b = additive_from_moore(F, w);
          if (!(a == b)) {
            out << "span and Moore polynomials differ at p=" << p << " n=" << n;
            return false;
          }
          if (n == 1 && a.coeffs() != std::vector<Fq>{F.neg(F.pow(w[0], p - 1)), F.one()}) {
            out << "n=1 polynomial is not X^p - w^{p-1} X";
            return false;
          }
          const Fq x = detail::random_elem(F, rng), y = detail::random_elem(F, rng);
          if (additive_eval(a, F.add(x, y)) != F.add(additive_eval(a, x), additive_eval(a, y))) {
            out << "additivity fails";
            return false;
          }
          ++tuples;
        }
      }
      // Additivity on 100 random series pairs.
      const Field F = Field::make(p, 2);
      const std::vector<Fq> w{F.one(), F.basis_element(1)};
      const auto P = additive_from_span(F, w);
      for (int trial = 0; trial < 100; ++trial) {
        auto rand_series = [&] {
          std::vector<Fq> c;
          for (int i = 0; i < 12; ++i) c.push_back(detail::random_elem(F, rng));
          return LaurentSeries::from_coeffs(F, -3, c, 9);
        };
        const auto x = rand_series(), y = rand_series();
        if (!agree(additive_eval(P, x + y), additive_eval(P, x) + additive_eval(P, y))) {
          out << "series additivity fails";
          return false;
        }
      }
    }
    out << tuples << " independent tuples";
    return true;
  });
}

/// 6. The one-step AS towers pass compat_check; perturbed cocycles fail.
inline Result compatibility(std::uint64_t seed) {
  return detail::timed(6, "compatibility P(C(s)) = (s-1)D", 0, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 6);
    for (auto [p, lam] : {std::pair<std::uint32_t, long>{5, 13}, {7, 9}}) {
      const Field F = Field::make(p);
      const TowerAction A = as_tower(F, lam, F.one());
      const auto rep = compat_check(A);
      if (!rep.pass) {
        out << "valid tower rejected: " << rep.check;
        return false;
      }
      const TowerRing& R = A.ring();
      const MonomialBasis Mc = module_basis(R.shape(), lam);
      for (int trial = 0; trial < 50; ++trial) {
        GroupAction act = A.data();
        TowerElement delta = R.zero();
        // A constant homomorphism is a rescaling of f_1 and stays valid.
        while (delta.is_zero() || (trial % 2 == 1 && delta.is_constant()))
          for (const auto& mono : Mc.monomials) delta.add_term(F, mono.exps, detail::random_elem(F, rng));
        if (trial % 2 == 0) {
          // Change a single value.
          const std::size_t g = 1 + detail::below(rng, p - 1);
          act.cocycles[0][g] = R.add(act.cocycles[0][g], delta);
        } else {
          // Add the homomorphism s^j -> j delta: still a cocycle.
          for (std::size_t g = 0; g < p; ++g)
            act.cocycles[0][g] = R.add(act.cocycles[0][g], R.scale(delta, F.from_int(static_cast<long>(g))));
        }
        const auto bad = compat_check(TowerAction(R, act));
        if (bad.pass) {
          out << "perturbation " << trial << " accepted at p=" << p;
          return false;
        }
        if (bad.check.empty()) {
          out << "rejection without a witness";
          return false;
        }
      }
    }
    out << "valid towers pass, 100 perturbations rejected with witnesses";
    return true;
  });
}

/// 7. y o Phi_c = y + c and x o Phi_c = x at N = 512, break m.
inline Result transport(std::uint64_t seed) {
  return detail::timed(7, "action transport", 60, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 7);
    std::size_t cases = 0;
    for (auto [p, m] : {std::pair<std::uint32_t, long>{5, 13}, {7, 9}}) {
      const Field F = Field::make(p, 2);
      for (int trial = 0; trial < 20; ++trial) {
        const Fq c = detail::random_nonzero(F, rng);
        const auto cov = expand_as_cover(F, m, 512, c);
        if (!cov.relation_ok) {
          out << "expansion does not satisfy the relation";
          return false;
        }
        const auto rep = verify_action_transport(cov, c);
        if (!rep.pass) {
          out << "p=" << p << " m=" << m << " c=" << c.v << ": y " << rep.y_ok << " x " << rep.x_ok << " break "
              << rep.lower_break;
          return false;
        }
        ++cases;
      }
    }
    out << cases << " constants over F_{p^2}";
    return true;
  });
}

/// 8. Synthesis: the s = 1 family and a Z/25 two-step tower.
inline Result synthesis(std::uint64_t) {
  return detail::timed(8, "synthesis of compatible cocycles", 300, [&](std::ostringstream& out) {
    const Field F = Field::make(5);
    {
      const long lam = 13;
      const TowerAction base = base_tower(F, 5, FiniteGroup::cyclic(5));
      const auto res = solve_compatible_cocycles(base, lam, 1);
      if (!res.consistent) {
        out << "s=1 system inconsistent";
        return false;
      }
      // (C(s) = 1, D = f_0^lam) must lie in the affine family.
      const TowerRing& R = base.ring();
      const ModuleCoords Mc(R, res.cocycle_basis), Md(R, res.d_basis);
      auto pack = [&](const CocycleSolution& s) {
        Vec v = Mc.coords(s.gen_values[0]);
        const Vec d = Md.coords(s.D);
        v.insert(v.end(), d.begin(), d.end());
        return v;
      };
      const Vec target = pack({{R.one()}, TowerElement::monomial({static_cast<int>(lam)}, F.one())});
      const Vec diff = vec_sub(target, pack(res.particular), F.p());
      Matrix H(F.p(), diff.size(), res.homogeneous.size() + 1);
      for (std::size_t j = 0; j < res.homogeneous.size(); ++j) {
        const Vec h = pack(res.homogeneous[j]);
        for (std::size_t i = 0; i < h.size(); ++i) H(i, j) = h[i];
      }
      const std::size_t r0 = rank(H);
      for (std::size_t i = 0; i < diff.size(); ++i) H(i, res.homogeneous.size()) = diff[i];
      if (rank(H) != r0) {
        out << "AS solution (1, x^" << lam << ") not in the family";
        return false;
      }
      const TowerAction T = realize(base, res, lam);
      if (!compat_check(T).pass) {
        out << "realized s=1 tower fails compat_check";
        return false;
      }
    }
    const TowerAction base = base_tower(F, 25, FiniteGroup::cyclic(25));
    const auto r1 = solve_compatible_cocycles(base, 5, 1);
    if (!r1.consistent) {
      out << "Z/25 first step inconsistent";
      return false;
    }
    const TowerAction T1 = realize(base, r1, 5);
    const auto r2 = solve_compatible_cocycles(T1, 21, 1);
    if (!r2.consistent) {
      out << "Z/25 second step inconsistent";
      return false;
    }
    const TowerAction T2 = realize(T1, r2, 21);
    const auto cc = compat_check(T2);
    const auto oc = cyclic_order_check(T2, 2);
    const auto rj = representation_jumps(T2);
    out << "Z/25 with poles 25,5,21: compat " << cc.pass << ", order " << oc.pass << ", jumps";
    for (auto c : rj.jumps) out << " " << c;
    out << " generators";
    for (auto m : rj.generator_poles) out << " " << m;
    return cc.pass && oc.pass && rj.consistent;
  });
}

/// 9. h1_cyclic against a cocycle-system oracle.
inline Result cohomology(std::uint64_t seed) {
  return detail::timed(9, "H^1 of cyclic groups", 0, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 9);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint32_t p = 5;
      const bool big = trial % 2 == 1;
      const std::size_t n = 1 + detail::below(rng, 20);
      const Matrix S = detail::random_unipotent(p, n, big ? 0 : 5, rng);
      const auto rep = h1_cyclic(S, big ? 2 : 1);
      const std::size_t oracle = detail::h1_oracle(S, big ? 25 : 5);
      if (rep.h1 != oracle) {
        out << "trial " << trial << ": h1 " << rep.h1 << " vs oracle " << oracle;
        return false;
      }
    }
    const auto triv = h1_cyclic(Matrix::identity(5, 7), 1);
    if (triv.h1 != 7) {
      out << "trivial action gives " << triv.h1;
      return false;
    }
    for (std::size_t copies : {1u, 4u}) {
      const auto reg = h1_cyclic(detail::cyclic_shift(5, 5, copies), 1);
      if (reg.h1 != 0) {
        out << "regular representation gives " << reg.h1;
        return false;
      }
    }
    out << "50 random actions match the oracle; trivial and regular cases correct";
    return true;
  });
}

/// 10. Rescaling keeps the verdicts of 6 and 7 and round-trips exactly.
inline Result rescaling(std::uint64_t seed) {
  return detail::timed(10, "rescaling invariance", 0, [&](std::ostringstream& out) {
    detail::Rng rng(seed ^ 10);
    const std::uint32_t p = 5;
    const long m = 13;
    const int N = 192;
    const Field F = Field::make(p);
    const TowerAction A = as_tower(F, m, F.one());
    const TowerRing& R = A.ring();
    const auto cov = expand_as_cover(F, m, N);
    const MonomialBasis low = module_basis(R.shape(), m);
    for (int trial = 0; trial < 20; ++trial) {
      const Fq mu = detail::random_nonzero(F, rng);
      const Fq lambda = F.pow(mu, -m);
      TowerElement a = R.zero();
      for (const auto& mono : low.monomials) a.add_term(F, mono.exps, detail::random_elem(F, rng));
      const TowerAction B = rescale_generator(A, 1, lambda, a);
      if (!compat_check(B).pass) {
        out << "rescaled tower fails compat_check";
        return false;
      }
      const TowerAction back = rescale_generator(B, 1, F.inv(lambda), B.ring().scale(a, F.neg(F.inv(lambda))));
      if (!(back.ring().spec().relations[0].P == R.spec().relations[0].P) ||
          !(back.ring().spec().relations[0].D == R.spec().relations[0].D) ||
          back.data().cocycles != A.data().cocycles) {
        out << "round trip is not the identity";
        return false;
      }
      // Transport in the canonical uniformizer of y' = lambda y + a(x).
      const std::vector<LaurentSeries> f{cov.x, cov.y};
      const LaurentSeries yp = cov.y.scaled(lambda) + evaluate(a, f, N);
      const LaurentSeries tp = canonical_uniformizer(yp, m);
      const auto phi = build_phi(F, F.one(), m, N);
      const auto phi_new = conjugate(phi, tp);
      const Fq c_new = B.cocycle(1, 1).constant_term();
      const auto expect = build_phi(F, c_new, m, phi_new.precision());
      if (!agree(phi_new.series(), expect.series()) || ramification_break(phi_new) != m) {
        out << "conjugated element is not Phi_{lambda c}";
        return false;
      }
      // x and y' in the new uniformizer are transported correctly.
      const LaurentSeries tp_inv = reversion(tp.scaled(F.inv(tp.leading())));
      const LaurentSeries back_t = compose(tp_inv, LaurentSeries::monomial(F, F.inv(tp.leading()), 1, N));
      const LaurentSeries x_new = compose(cov.x, back_t);
      const LaurentSeries y_new = compose(yp, back_t);
      const LaurentSeries x_res = compose(x_new, phi_new.series()) - x_new;
      const LaurentSeries y_res = compose(y_new, phi_new.series()) - (y_new + LaurentSeries::constant(F, c_new, N));
      if (!x_res.is_zero() || !y_res.is_zero() || x_res.precision() < N / 2) {
        out << "transport fails after rescaling";
        return false;
      }
    }
    out << "20 rescalings keep compat and transport; round trips exact";
    return true;
  });
}

inline std::vector<Result> run_all(std::uint64_t seed = default_seed) {
  return {group_law(seed),    order_p(seed),     worked_expansion(seed), ramification(seed),
          moore_identities(seed), compatibility(seed), transport(seed),   synthesis(seed),
          cohomology(seed),   rescaling(seed)};
}

/// One line per criterion: "[PASS] 1 group law ... (0.41 s): detail".
inline std::string format(const Result& r, bool with_time = true) {
  std::ostringstream o;
  o << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name;
  if (with_time) o << " (" << static_cast<long>(r.seconds * 1000) << " ms)";
  o << ": " << r.detail;
  return o.str();
}

}  // namespace hkg::acceptance

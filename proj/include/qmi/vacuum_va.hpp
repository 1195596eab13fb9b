#pragma once

#include "qmi/fock.hpp"

namespace qmi {

/// Vacuum vertex algebra of an affinized Lie algebra at a fixed level,
/// truncated at degree D. The carrier is the creation-side Fock space; the
/// vertex operator modes uₙ are reconstructed from generator modes through
/// the iterate identity, one creation factor at a time.
struct VacuumVA {
  FockSpace fock;

  std::map<std::tuple<long, long, long>, Vec> mode_memo;

  const GradedModule& mod() const { return fock.mod; }
  long D() const { return fock.D; }
  Vec vacuum() const { return basis_vec(fock.mod, 0); }
};

inline VacuumVA build_vacuum(const LieData& lie, const Rational& level, long D) {
  if (D < 0) throw std::invalid_argument("build_vacuum: cutoff must be nonnegative");
  VacuumVA v;
  v.fock = build_vacuum_fock(lie, level, D);
  return v;
}

Vec vertex_mode(VacuumVA& V, const Vec& u, long k, const Vec& w);

namespace detail {

inline Vec vertex_mode_basis(VacuumVA& V, long iu, long k, long iw) {
  FockSpace& f = V.fock;
  const Monomial& M = f.basis[iu];
  if (M.empty()) return k == -1 ? basis_vec(f.mod, iw) : zero_vec(f.mod);
  long out = f.mod.degree_of(iu) + f.mod.degree_of(iw) - k - 1;
  if (out < 0) return zero_vec(f.mod);
  if (out > f.D)
    throw watermark_exceeded("vertex_mode: product degree " + std::to_string(out) +
                             " exceeds the cutoff " + std::to_string(f.D));

  auto key = std::make_tuple(iu, k, iw);
  if (auto it = V.mode_memo.find(key); it != V.mode_memo.end()) return it->second;

  auto [d1, c1] = M.front();
  long j = f.rel[d1].free_cols[c1];
  Monomial rest(M.begin() + 1, M.end());
  long ir = f.index.at(rest);
  long dr = f.mod.degree_of(ir);
  long dw = f.mod.degree_of(iw);
  Rational sgn = (d1 % 2 == 0) ? Rational(1) : Rational(-1);
  Vec uj = Vec::Zero(f.lie.dim());
  uj(j) = 1;

  // (a₍₋d₎u')ₖ = Σᵢ (−1)ⁱ C(−d,i) (a₋d₋ᵢ u'ₖ₊ᵢ − (−1)ᵈ u'₋d₊ₖ₋ᵢ aᵢ)
  Vec res = zero_vec(f.mod);
  for (long i = 0; dr + dw - (k + i) - 1 >= 0; ++i) {
    Vec inner = vertex_mode_basis(V, ir, k + i, iw);
    if (!is_zero_vec(inner)) {
      Rational c = binomial(-d1, i);
      if (i % 2 != 0) c = -c;
      res += c * act_gen_vec(f, uj, -(d1 + i), inner);
    }
  }
  for (long i = 0; i <= dw; ++i) {
    Vec aw = act_gen(f, j, i, iw);
    if (is_zero_vec(aw)) continue;
    Rational c = sgn * binomial(-d1, i);
    if (i % 2 != 0) c = -c;
    Vec inner = zero_vec(f.mod);
    for (long t = 0; t < f.mod.dim(); ++t)
      if (aw(t) != 0) inner += aw(t) * vertex_mode_basis(V, ir, -d1 + k - i, t);
    res -= c * inner;
  }
  return V.mode_memo.emplace(key, std::move(res)).first->second;
}

}  // namespace detail

inline Vec vertex_mode(VacuumVA& V, const Vec& u, long k, const Vec& w) {
  Vec out = zero_vec(V.fock.mod);
  for (long iu = 0; iu < V.fock.mod.dim(); ++iu) {
    if (u(iu) == 0) continue;
    for (long iw = 0; iw < V.fock.mod.dim(); ++iw)
      if (w(iw) != 0) out += u(iu) * w(iw) * detail::vertex_mode_basis(V, iu, k, iw);
  }
  return out;
}

/// All modes uₙw the cutoff can hold, zero results dropped.
inline std::map<long, Vec> vertex_modes(VacuumVA& V, const Vec& u, const Vec& w) {
  long du = 0, dw = 0;
  for (long i = 0; i < V.fock.mod.dim(); ++i) {
    if (u(i) != 0) du = std::max(du, V.fock.mod.degree_of(i));
    if (w(i) != 0) dw = std::max(dw, V.fock.mod.degree_of(i));
  }
  std::map<long, Vec> out;
  for (long k = du + dw - 1 - V.fock.D; k <= du + dw - 1; ++k) {
    Vec r = vertex_mode(V, u, k, w);
    if (!is_zero_vec(r)) out.emplace(k, std::move(r));
  }
  return out;
}

/// Translation operator L(−1): u ↦ u₋₂1.
inline Vec translation(VacuumVA& V, const Vec& u) {
  return vertex_mode(V, u, -2, V.vacuum());
}

/// [uₘ, vₙ]w against Σᵢ C(m,i) (uᵢv)ₘ₊ₙ₋ᵢ w on every basis vector where all
/// intermediate degrees stay below the cutoff. Violations are reported.
inline std::vector<std::string> borcherds_commutator_check(VacuumVA& V, const Vec& u,
                                                           const Vec& v, long m, long n) {
  std::vector<std::string> issues;
  const GradedModule& mod = V.fock.mod;
  long du = 0, dv = 0;
  for (long i = 0; i < mod.dim(); ++i) {
    if (u(i) != 0) du = std::max(du, mod.degree_of(i));
    if (v(i) != 0) dv = std::max(dv, mod.degree_of(i));
  }
  long checked = 0;
  for (long iw = 0; iw < mod.dim(); ++iw) {
    long dw = mod.degree_of(iw);
    if (dv + dw - n - 1 > V.fock.D || du + dw - m - 1 > V.fock.D) continue;
    if (du + dv + dw - m - n - 2 > V.fock.D) continue;
    Vec w = basis_vec(mod, iw);
    Vec lhs = vertex_mode(V, u, m, vertex_mode(V, v, n, w)) -
              vertex_mode(V, v, n, vertex_mode(V, u, m, w));
    Vec rhs = zero_vec(mod);
    for (long i = 0; i <= du + dv - 1; ++i) {
      Rational c = binomial(m, i);
      if (c == 0) continue;
      Vec uiv = vertex_mode(V, u, i, v);
      if (!is_zero_vec(uiv)) rhs += c * vertex_mode(V, uiv, m + n - i, w);
    }
    if (!is_zero_vec(lhs - rhs))
      issues.push_back("commutator formula fails at modes (" + std::to_string(m) + "," +
                       std::to_string(n) + ") on " + mod.label(iw));
    ++checked;
  }
  if (checked == 0)
    issues.push_back("no basis vector fits the cutoff for modes (" + std::to_string(m) +
                     "," + std::to_string(n) + ")");
  return issues;
}

/// uₙv = Σⱼ (−1)^{n+1+j} (1/j!) L(−1)ʲ (vₙ₊ⱼu), checked as far as the cutoff
/// allows.
inline std::vector<std::string> skew_symmetry_check(VacuumVA& V, const Vec& u,
                                                    const Vec& v, long n) {
  std::vector<std::string> issues;
  const GradedModule& mod = V.fock.mod;
  long du = 0, dv = 0;
  for (long i = 0; i < mod.dim(); ++i) {
    if (u(i) != 0) du = std::max(du, mod.degree_of(i));
    if (v(i) != 0) dv = std::max(dv, mod.degree_of(i));
  }
  if (du + dv - n - 1 > V.fock.D || du + dv - n - 1 < 0) {
    issues.push_back("mode " + std::to_string(n) + " falls outside the cutoff");
    return issues;
  }
  Vec lhs = vertex_mode(V, u, n, v);
  Vec rhs = zero_vec(mod);
  for (long j = 0; n + j <= du + dv - 1; ++j) {
    Vec t = vertex_mode(V, v, n + j, u);
    for (long s = 0; s < j; ++s) t = translation(V, t);
    Rational c = Rational(1) / factorial(j);
    if ((n + 1 + j) % 2 != 0) c = -c;
    rhs += c * t;
  }
  if (!is_zero_vec(lhs - rhs))
    issues.push_back("skew symmetry fails at mode " + std::to_string(n));
  return issues;
}

/// L(γ) = φ(γ)^{L(0)} γ, the factor-wise action scaled on each degree
/// component.
inline Vec gamma_action(VacuumVA& V, const GammaElement& g, const Vec& v) {
  FockSpace& f = V.fock;
  std::function<Vec(long)> raw = [&](long idx) -> Vec {
    const Monomial& M = f.basis[idx];
    if (M.empty()) return basis_vec(f.mod, idx);
    auto [d1, c1] = M.front();
    Monomial rest(M.begin() + 1, M.end());
    Vec tail = raw(f.index.at(rest));
    Vec ga = g.action.col(f.rel[d1].free_cols[c1]);
    return act_gen_vec(f, ga, -d1, tail);
  };
  Rational phi_g = g.psi.alpha;
  Vec out = zero_vec(f.mod);
  for (long idx = 0; idx < f.mod.dim(); ++idx) {
    if (v(idx) == 0) continue;
    out += v(idx) * pow_rational(phi_g, f.mod.degree_of(idx)) * raw(idx);
  }
  return out;
}

}  // namespace qmi

#pragma once

#include "qmi/lie_algebra.hpp"
#include "qmi/operator_field.hpp"

#include <map>
#include <utility>

namespace qmi {

/// PBW monomial: (depth, creation index) pairs, depth descending, ties by
/// creation index ascending.  Depth d ≥ 1 corresponds to Lie mode sign·d.
using Monomial = std::vector<std::pair<long, long>>;

inline long mono_degree(const Monomial& m) {
  long s = 0;
  for (const auto& [d, c] : m) s += d;
  return s;
}

/// Induced restricted module on which the mode algebra acts: highest-weight
/// vector killed by non-creation modes, k acting as the level scalar.
/// sign = −1 gives the vacuum picture (creation modes −1, −2, …), sign = +1
/// the module at infinity (creation modes 1, 2, …).  The Γ-quotient is never
/// materialized: each depth carries the row span of the relations
/// γa − φ(γ)^mode a, and creation operators act through its complement.
struct FockSpace {
  LieData lie;
  GammaData gamma;
  Rational level;
  int sign = -1;
  long D = 0;

  GradedModule mod;
  std::vector<Monomial> basis;
  std::map<Monomial, long> index;
  std::vector<RowSpan> rel;  // per depth, entry 0 unused

  std::map<std::pair<long, long>, std::map<long, Vec>> memo;  // (gen, mode) → column

  long depth_dim(long d) const { return long(rel[d].free_cols.size()); }
};

/// Spec-facing name: the mode algebra exists only through this action data.
using ModeAlgebraAction = FockSpace;

inline std::string mono_label(const FockSpace& f, const Monomial& m) {
  std::string s;
  for (const auto& [d, c] : m) {
    long j = f.rel[d].free_cols[c];
    s += f.lie.labels[j] + "(" + std::to_string(f.sign * d) + ")";
  }
  s += (f.sign < 0) ? "1" : "v0";
  return s;
}

namespace detail {

inline void enum_monos(const FockSpace& f, long remaining, long maxdepth, Monomial& cur,
                       std::vector<Monomial>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (long d = std::min(maxdepth, remaining); d >= 1; --d) {
    long gen_lo = (!cur.empty() && cur.back().first == d) ? cur.back().second : 0;
    for (long t = gen_lo; t < f.depth_dim(d); ++t) {
      cur.push_back({d, t});
      enum_monos(f, remaining - d, d, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace detail

inline FockSpace build_fock(LieData lie, GammaData gamma, const Rational& level, int sign,
                            long D) {
  if (!gamma.pure_scalings())
    throw nonzero_translation("build_fock: Ψ(Γ) must consist of pure scalings");
  FockSpace f;
  f.lie = std::move(lie);
  f.gamma = std::move(gamma);
  f.level = level;
  f.sign = sign;
  f.D = D;
  long n = f.lie.dim();
  f.rel.resize(D + 1);
  for (long d = 1; d <= D; ++d) {
    long mode = sign * d;
    std::vector<Vec> rows;
    for (size_t gi = 1; gi < f.gamma.elements.size(); ++gi) {
      const auto& g = f.gamma.elements[gi];
      Mat R = g.action - pow_rational(g.psi.alpha, mode) * Mat::Identity(n, n);
      for (long j = 0; j < n; ++j) {
        Vec v = R.col(j);
        if (!is_zero_vec(v)) rows.push_back(std::move(v));
      }
    }
    Mat K(long(rows.size()), n);
    for (long i = 0; i < long(rows.size()); ++i) K.row(i) = rows[i].transpose();
    f.rel[d] = row_span(K);
  }
  std::vector<std::vector<std::string>> labels(D + 1);
  for (long deg = 0; deg <= D; ++deg) {
    Monomial cur;
    std::vector<Monomial> ms;
    detail::enum_monos(f, deg, deg, cur, ms);
    for (auto& m : ms) {
      f.index[m] = long(f.basis.size());
      f.basis.push_back(m);
      labels[deg].push_back(mono_label(f, m));
    }
  }
  f.mod = GradedModule::from_labels(std::move(labels));
  return f;
}

inline FockSpace build_vacuum_fock(const LieData& lie, const Rational& level, long D) {
  return build_fock(lie, gamma_trivial(lie.dim()), level, -1, D);
}

inline FockSpace build_infinity_fock(const LieData& lie, const GammaData& gamma,
                                     const Rational& level, long D) {
  return build_fock(lie, gamma, level, +1, D);
}

Vec act_gen(FockSpace& f, long j, long n, long idx);

inline Vec act_gen_on_basis(FockSpace& f, const Vec& u, long n, long idx) {
  Vec out = Vec::Zero(f.mod.dim());
  for (long j = 0; j < f.lie.dim(); ++j)
    if (u(j) != 0) out += u(j) * act_gen(f, j, n, idx);
  return out;
}

inline Vec act_gen_vec(FockSpace& f, const Vec& u, long n, const Vec& w) {
  Vec out = Vec::Zero(f.mod.dim());
  for (long idx = 0; idx < f.mod.dim(); ++idx)
    if (w(idx) != 0) out += w(idx) * act_gen_on_basis(f, u, n, idx);
  return out;
}

namespace detail {

/// Target-algebra bracket [a_m, b_n] applied to a basis vector, pure-scaling
/// expansion: Σ_γ γ_s^m ([γa,b]_{m+n} + ℓ⟨γa,b⟩ m δ_{m+n,0}).
inline Vec bracket_apply_basis(FockSpace& f, const Vec& a, long m, const Vec& b, long n,
                               long idx) {
  Vec out = Vec::Zero(f.mod.dim());
  for (const auto& g : f.gamma.elements) {
    Rational wgt = pow_rational(invert(g.psi).alpha, m);
    Vec ga = g.action * a;
    Vec cvec = f.lie.bracket(ga, b);
    if (!is_zero_vec(cvec)) out += wgt * act_gen_on_basis(f, cvec, m + n, idx);
    if (m + n == 0) {
      Rational cen = f.level * f.lie.form(ga, b) * Rational(m) * wgt;
      if (cen != 0) out += cen * basis_vec(f.mod, idx);
    }
  }
  return out;
}

inline Vec apply_creation_to_vec(FockSpace& f, long d1, long c1, const Vec& v) {
  long j = f.rel[d1].free_cols[c1];
  Vec out = Vec::Zero(f.mod.dim());
  for (long idx = 0; idx < f.mod.dim(); ++idx)
    if (v(idx) != 0) out += v(idx) * act_gen(f, j, f.sign * d1, idx);
  return out;
}

/// Insert the (already reduced) creation generator (depth, t) into a basis
/// monomial, straightening out-of-order heads through the bracket.
inline Vec insert_creation(FockSpace& f, long depth, long t, long idx) {
  const Monomial M = f.basis[idx];
  if (M.empty() || depth > M.front().first ||
      (depth == M.front().first && t <= M.front().second)) {
    Monomial M2;
    M2.reserve(M.size() + 1);
    M2.push_back({depth, t});
    M2.insert(M2.end(), M.begin(), M.end());
    return basis_vec(f.mod, f.index.at(M2));
  }
  auto [d1, c1] = M.front();
  Monomial rest(M.begin() + 1, M.end());
  long ridx = f.index.at(rest);
  Vec tail = insert_creation(f, depth, t, ridx);
  Vec out = apply_creation_to_vec(f, d1, c1, tail);
  long jb = f.rel[d1].free_cols[c1];
  Vec a = Vec::Zero(f.lie.dim()), b = Vec::Zero(f.lie.dim());
  a(f.rel[depth].free_cols[t]) = 1;
  b(jb) = 1;
  out += bracket_apply_basis(f, a, f.sign * depth, b, f.sign * d1, ridx);
  return out;
}

}  // namespace detail

inline Vec act_gen(FockSpace& f, long j, long n, long idx) {
  long depth = f.sign * n;
  const Monomial& M = f.basis[idx];
  if (depth >= 1 && mono_degree(M) + depth > f.D)
    throw watermark_exceeded("act_gen: creation at depth " + std::to_string(depth) +
                             " leaves the watermark from degree " +
                             std::to_string(mono_degree(M)));
  auto key = std::make_pair(j, n);
  auto& slot = f.memo[key];
  if (auto it = slot.find(idx); it != slot.end()) return it->second;

  Vec res;
  if (depth >= 1) {
    Vec u = Vec::Zero(f.lie.dim());
    u(j) = 1;
    u = f.rel[depth].reduce(std::move(u));
    res = Vec::Zero(f.mod.dim());
    for (long t = 0; t < f.depth_dim(depth); ++t) {
      const Rational& c = u(f.rel[depth].free_cols[t]);
      if (c != 0) res += c * detail::insert_creation(f, depth, t, idx);
    }
  } else if (M.empty()) {
    res = Vec::Zero(f.mod.dim());
  } else {
    auto [d1, c1] = M.front();
    Monomial rest(M.begin() + 1, M.end());
    long ridx = f.index.at(rest);
    Vec tail = act_gen(f, j, n, ridx);
    res = detail::apply_creation_to_vec(f, d1, c1, tail);
    Vec a = Vec::Zero(f.lie.dim()), b = Vec::Zero(f.lie.dim());
    a(j) = 1;
    b(f.rel[d1].free_cols[c1]) = 1;
    res += detail::bracket_apply_basis(f, a, n, b, f.sign * d1, ridx);
  }
  slot.emplace(idx, res);
  return res;
}

/// [a_m, b_n]w with the full translation-aware expansion
/// Σ_γ Σ_{i≥0} C(m,i) s^{m−i} d₀^i [γa,b]_{m+n−i} plus the central term,
/// s and d₀ the scaling and translation of Ψ(γ)⁻¹.  Truncation of the i-sum
/// comes from the annihilation profile of w, so translations require the
/// module-at-infinity grading direction.
inline Vec mode_bracket_apply(FockSpace& f, const Vec& a, long m, const Vec& b, long n,
                              const Vec& w) {
  Vec out = Vec::Zero(f.mod.dim());
  long maxdeg = -1;
  for (long idx = 0; idx < f.mod.dim(); ++idx)
    if (w(idx) != 0) maxdeg = std::max(maxdeg, f.mod.degree_of(idx));
  if (maxdeg < 0) return out;
  for (const auto& g : f.gamma.elements) {
    LinearMap gi = invert(g.psi);
    Vec ga = g.action * a;
    Vec cvec = f.lie.bracket(ga, b);
    Rational pr = f.lie.form(ga, b);
    if (gi.beta == 0) {
      Rational wgt = pow_rational(gi.alpha, m);
      if (!is_zero_vec(cvec)) out += wgt * act_gen_vec(f, cvec, m + n, w);
      if (m + n == 0 && pr != 0) out += f.level * pr * Rational(m) * wgt * w;
    } else {
      if (f.sign != +1)
        throw nonzero_translation(
            "mode_bracket_apply: translation parts need the restricted grading of the module "
            "at infinity");
      long imax = m + n + maxdeg;
      if (!is_zero_vec(cvec))
        for (long i = 0; i <= imax; ++i) {
          Rational coef =
              binomial(m, i) * pow_rational(gi.alpha, m - i) * pow_rational(gi.beta, i);
          if (coef == 0) continue;
          out += coef * act_gen_vec(f, cvec, m + n - i, w);
        }
      if (m + n >= 0 && pr != 0) {
        Rational cen = f.level * pr * Rational(-n) * binomial(m, m + n) *
                       pow_rational(gi.alpha, -n) * pow_rational(gi.beta, m + n);
        if (cen != 0) out += cen * w;
      }
    }
  }
  return out;
}

/// Field of a Lie algebra vector on the module at infinity: mode u(m) at
/// exponent −m−1, degree shift m.
inline OperatorField vector_field(FockSpace& f, const Vec& u) {
  if (f.sign != +1)
    throw std::logic_error("vector_field: module-at-infinity Fock space required");
  return field_from_modes(f.mod, 0,
                          [&f, u](long n, long idx) { return act_gen_on_basis(f, u, n, idx); });
}

inline OperatorField generator_field(FockSpace& f, long j) {
  Vec u = Vec::Zero(f.lie.dim());
  u(j) = 1;
  return vector_field(f, u);
}

inline std::vector<std::string> jacobi_check(FockSpace& f, long degree_bound) {
  std::vector<std::string> issues;
  long ngen = std::min<long>(f.lie.dim(), 3);
  std::vector<std::pair<long, long>> xs;
  for (long j = 0; j < ngen; ++j)
    for (long n : {-2, -1, 0, 1, 2}) xs.push_back({j, n});
  auto unit = [&](long j) {
    Vec v = Vec::Zero(f.lie.dim());
    v(j) = 1;
    return v;
  };
  auto shift = [&](long n) { return f.sign * n; };
  auto describe = [&](long j, long n) {
    return f.lie.labels[j] + " at mode " + std::to_string(n);
  };
  long checked = 0;
  for (auto [j1, n1] : xs)
    for (auto [j2, n2] : xs)
      for (long idx = 0; idx < f.mod.dim(); ++idx) {
        if (issues.size() >= 5) return issues;
        long deg = f.mod.degree_of(idx);
        if (deg > degree_bound) continue;
        if (deg + shift(n1) > f.D || deg + shift(n2) > f.D ||
            deg + shift(n1) + shift(n2) > f.D)
          continue;
        Vec w = basis_vec(f.mod, idx);
        Vec lhs = mode_bracket_apply(f, unit(j1), n1, unit(j2), n2, w);
        Vec comm = act_gen_vec(f, unit(j1), n1, act_gen(f, j2, n2, idx)) -
                   act_gen_vec(f, unit(j2), n2, act_gen(f, j1, n1, idx));
        if (!is_zero_vec(lhs - comm))
          issues.push_back("bracket does not match the action commutator for (" +
                           describe(j1, n1) + ", " + describe(j2, n2) + ") on " +
                           f.mod.label(idx));
        Vec skew = mode_bracket_apply(f, unit(j2), n2, unit(j1), n1, w);
        if (!is_zero_vec(lhs + skew))
          issues.push_back("skew-symmetry fails for (" + describe(j1, n1) + ", " +
                           describe(j2, n2) + ") on " + f.mod.label(idx));
        ++checked;
      }
  if (f.gamma.pure_scalings()) {
    std::vector<std::pair<long, long>> zs = {{0, 1}, {0, -1}, {ngen - 1, 2}, {ngen - 1, 0}};
    auto apply_combo_bracket = [&](const ModeCombo& cb, const Vec& bv, long bn,
                                   const Vec& w) {
      Vec out = Vec::Zero(f.mod.dim());
      for (const auto& [tm, tv] : cb.terms)
        out += mode_bracket_apply(f, tv, tm, bv, bn, w);
      return out;
    };
    for (auto [ja, na] : zs)
      for (auto [jb, nb] : zs)
        for (auto [jc, nc] : zs) {
          long total = shift(na) + shift(nb) + shift(nc);
          for (long idx = 0; idx < f.mod.dim(); ++idx) {
            if (issues.size() >= 5) return issues;
            long deg = f.mod.degree_of(idx);
            if (deg > degree_bound || deg + total > f.D) continue;
            Vec w = basis_vec(f.mod, idx);
            ModeCombo ab =
                mode_bracket_symbolic(unit(ja), na, unit(jb), nb, f.lie, f.gamma, f.level);
            ModeCombo bc =
                mode_bracket_symbolic(unit(jb), nb, unit(jc), nc, f.lie, f.gamma, f.level);
            ModeCombo ac =
                mode_bracket_symbolic(unit(ja), na, unit(jc), nc, f.lie, f.gamma, f.level);
            Vec lhs = apply_combo_bracket(ab, unit(jc), nc, w);
            Vec r1 = Vec::Zero(f.mod.dim());
            for (const auto& [tm, tv] : bc.terms)
              r1 += mode_bracket_apply(f, unit(ja), na, tv, tm, w);
            Vec r2 = Vec::Zero(f.mod.dim());
            for (const auto& [tm, tv] : ac.terms)
              r2 += mode_bracket_apply(f, unit(jb), nb, tv, tm, w);
            if (!is_zero_vec(lhs - (r1 - r2)))
              issues.push_back("Jacobi identity fails for (" + describe(ja, na) + ", " +
                               describe(jb, nb) + ", " + describe(jc, nc) + ") on " +
                               f.mod.label(idx));
            ++checked;
          }
        }
  }
  if (checked == 0) issues.push_back("no checkable samples within the degree bound");
  return issues;
}

}  // namespace qmi

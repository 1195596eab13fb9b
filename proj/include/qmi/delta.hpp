#pragma once

#include "qmi/biseries.hpp"
#include "qmi/poly.hpp"

namespace qmi {

struct order_not_zero : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct annihilation_fails : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// coefficient(y) · (1/j!) (∂/∂y)^j x⁻¹δ(g(y)/x), where (x, y) = (x₁, x₂)
/// for the standard orientation and (x₂, x₁) when axis2 is set (the form
/// produced by the flip identity).
template <class T>
struct DeltaTermT {
  LinearMap g;
  long j = 0;
  TSeries<T> coeff;
  bool axis2 = false;
};

using DeltaTerm = DeltaTermT<Rational>;

template <class T>
DeltaTermT<T> delta_term(const LinearMap& g, long j, TSeries<T> coeff,
                         bool axis2 = false) {
  if (j < 0) throw std::invalid_argument("delta_term: negative derivative order");
  DeltaTermT<T> t;
  t.g = g;
  t.j = j;
  t.coeff = std::move(coeff);
  t.axis2 = axis2;
  return t;
}

inline WindowedSeries const_series(Rational v, std::string var = "x2") {
  WindowedSeries s;
  s.var = std::move(var);
  s.lo = kNegInf;
  s.hi = 0;
  if (v != 0) s.c[0] = std::move(v);
  return s;
}

/// Coefficient array of the term, materialized for singular-variable
/// exponents in [sing_lo, sing_hi] and regular-variable exponents from
/// reg_lo up. Knowledge shape: that rectangle × half-line, cut by the
/// diagonal half-plane e₁+e₂ ≥ coeff.floor − j − 1 (below it the unknown
/// coefficient tail pollutes). Above the support diagonal the stream is
/// known zero, so the regular-variable ceiling is unbounded.
template <class T>
BiGrid<T> coeff_stream(const DeltaTermT<T>& t, long sing_lo, long sing_hi,
                       long reg_lo) {
  BiGrid<T> out;
  out.region = Region::kXinvY;
  if (t.axis2) {
    out.w1 = {reg_lo, kPosInf};
    out.w2 = {sing_lo, sing_hi};
  } else {
    out.w1 = {sing_lo, sing_hi};
    out.w2 = {reg_lo, kPosInf};
  }
  if (t.coeff.lo != kNegInf) out.wd = {t.coeff.lo - t.j - 1, kPosInf};
  if (t.coeff.c.empty()) return out;
  long kmax = t.coeff.c.rbegin()->first;
  long diag_top = kmax - 1 - t.j;
  for (long es = sing_lo; es <= sing_hi; ++es) {
    long n = -es - 1;
    long row_lo = std::max(reg_lo, out.wd.lo <= kNegInf ? reg_lo : out.wd.lo - es);
    long row_hi = diag_top - es;
    if (row_hi < row_lo) continue;
    // row value at reg-exponent e: Σ_k coeff_k · C(e-k+j, j) [g^n]_{e-k+j}
    long floor_needed = row_lo - kmax + t.j;
    WindowedSeries gpow =
        power_expand(t.g, n, std::min(floor_needed, n), t.axis2 ? "x1" : "x2");
    for (auto& [k, cv] : t.coeff.c) {
      for (long e = row_lo; e <= row_hi; ++e) {
        long ge = e - k + t.j;
        Rational bin = binomial(ge, t.j);
        if (bin == 0) continue;
        Rational dv = gpow.get(ge);
        if (dv == 0) continue;
        T v = cv * (bin * dv);
        if (t.axis2)
          out.add_at(e, es, v);
        else
          out.add_at(es, e, v);
      }
    }
  }
  return out;
}

template <class T>
struct DeltaDistT {
  std::vector<DeltaTermT<T>> singular;
  std::optional<BiGrid<T>> regular;

  void push(DeltaTermT<T> t) {
    if (t.coeff.is_zero_series() && t.coeff.lo == kNegInf) return;
    for (auto& s : singular)
      if (s.g == t.g && s.j == t.j && s.axis2 == t.axis2) {
        s.coeff = series_add(s.coeff, t.coeff);
        return;
      }
    singular.push_back(std::move(t));
  }
  void prune() {
    std::erase_if(singular, [](const DeltaTermT<T>& t) {
      return t.coeff.is_zero_series() && t.coeff.lo == kNegInf;
    });
  }
};

using DeltaDistribution = DeltaDistT<Rational>;

template <class T>
BiGrid<T> distribution_stream(const DeltaDistT<T>& d, long lo1, long hi1,
                              long lo2) {
  BiGrid<T> out;
  out.region = Region::kXinvY;
  out.w1 = {kNegInf, kPosInf};
  out.w2 = {kNegInf, kPosInf};
  for (auto& t : d.singular) {
    if (t.axis2)
      throw std::logic_error("distribution_stream: mixed-axis distribution");
    out = grid_add(out, coeff_stream(t, lo1, hi1, lo2));
  }
  if (d.regular) out = grid_add(out, *d.regular);
  return out;
}

/// One factor (x₁ − h(x₂)) against c·(1/j!)∂^j x₁⁻¹δ(g(x₂)/x₁):
/// the delta relation gives α_g·c·D_{j-1} plus ((g−h)(x₂)·c)·D_j.
template <class T>
void factor_once(DeltaDistT<T>& out, const DeltaTermT<T>& t, const LinearMap& h) {
  if (t.axis2)
    throw std::logic_error("poly_mul: axis-2 delta term not supported");
  if (t.j > 0) {
    DeltaTermT<T> down = t;
    down.j = t.j - 1;
    down.coeff = series_scale(t.coeff, t.g.alpha);
    out.push(std::move(down));
  }
  if (!(t.g == h)) {
    WindowedSeries lin;
    lin.var = t.coeff.var;
    lin.lo = kNegInf;
    lin.hi = 1;
    if (t.g.alpha != h.alpha) lin.c[1] = t.g.alpha - h.alpha;
    if (t.g.beta != h.beta) lin.c[0] = t.g.beta - h.beta;
    DeltaTermT<T> same = t;
    same.coeff = window_mul(lin, t.coeff);
    out.push(std::move(same));
  }
}

template <class T>
DeltaDistT<T> poly_mul(const DeltaDistT<T>& d,
                       const std::vector<std::pair<LinearMap, long>>& p) {
  DeltaDistT<T> cur = d;
  for (auto& [h, k] : p)
    for (long step = 0; step < k; ++step) {
      DeltaDistT<T> next;
      for (auto& t : cur.singular) factor_once(next, t, h);
      if (cur.regular) {
        BiSeries f = witness_poly({{h, 1}}, cur.regular->var1, cur.regular->var2);
        next.regular = grid_mul(f, *cur.regular);
      }
      next.prune();
      cur = std::move(next);
    }
  return cur;
}

/// x₁⁻¹δ(g(x₂)/x₁) = Φ(g)⁻¹ x₂⁻¹δ(g⁻¹(x₁)/x₂), coefficient carried to the
/// other axis through the singular support.
template <class T>
DeltaTermT<T> flip(const DeltaTermT<T>& t) {
  if (t.j != 0) throw order_not_zero("flip: derivative order must be 0");
  DeltaTermT<T> r;
  r.axis2 = !t.axis2;
  r.g = invert(t.g);
  r.coeff = series_scale(substitute_linear(t.coeff, r.g), Rational(1) / phi(t.g));
  r.coeff.var = t.axis2 ? "x2" : "x1";
  return r;
}

template <class T>
struct DecompEntry {
  LinearMap g;
  long j;
  TSeries<T> coeff;  // Lemma-normalized A_{ij}: no 1/j! inside
};

template <class T>
DeltaDistT<T> distribution_from_decomposition(const std::vector<DecompEntry<T>>& es) {
  DeltaDistT<T> d;
  for (auto& e : es) {
    DeltaTermT<T> t;
    t.g = e.g;
    t.j = e.j;
    t.coeff = series_scale(e.coeff, factorial(e.j));
    d.push(std::move(t));
  }
  d.prune();
  return d;
}

namespace detail {

/// (x₁ − g(x₂))^k as a polynomial in x₁ over the rational-function field in x₂.
inline Poly<RatFunc> witness_factor_rf(const LinearMap& g, long k) {
  Poly<RatFunc> f;
  f.c = {RatFunc(rpoly_linear(g), RPoly::constant(Rational(-1))), RatFunc(1)};
  Poly<RatFunc> acc = Poly<RatFunc>::constant(RatFunc(1));
  for (long i = 0; i < k; ++i) acc = poly_mul(acc, f);
  return acc;
}

/// Polynomial in x₁ with rational-function x₂-coefficients, expanded into a
/// grid with descending-x₂ series coefficients truncated at floor2.
template <class T>
BiGrid<Rational> rfpoly_grid(const Poly<RatFunc>& p, long floor2,
                             const BiGrid<T>& like) {
  BiGrid<Rational> out;
  out.var1 = like.var1;
  out.var2 = like.var2;
  out.region = Region::kPoly;
  out.w1 = {kNegInf, kPosInf};
  out.w2 = {floor2, kPosInf};
  for (long i = 0; i <= p.degree(); ++i) {
    if (p.coeff(i).is_zero()) continue;
    WindowedSeries s = ratfunc_expand_desc(p.coeff(i), floor2, like.var2);
    for (auto& [e2, v] : s.c) out.add_at(i, e2, v);
  }
  return out;
}

template <class T>
void decompose_single(const BiGrid<T>& A, const LinearMap& g, long k,
                      std::vector<DecompEntry<T>>& out, bool keep_zero) {
  BiGrid<T> Ag = grid_substitute_var2(A, invert(g));
  for (long j = 0; j < k; ++j) {
    BiSeries pw = witness_poly({{LinearMap(), j}}, A.var1, A.var2);
    BiGrid<T> M = grid_mul(pw, Ag);
    if (!M.w1.covers(-1))
      throw window_too_shallow("decompose: residue row -1 outside window");
    TSeries<T> Bj = series_scale(grid_row(M, -1), Rational(1) / factorial(j));
    TSeries<T> Aij =
        series_scale(substitute_linear(Bj, g), pow_rational(phi(g), -j));
    Aij.var = A.var2;
    DecompEntry<T> e{g, j, std::move(Aij)};
    if (keep_zero || !e.coeff.is_zero_series()) out.push_back(std::move(e));
  }
}

}  // namespace detail

/// Lemma-style decomposition of a p-annihilated two-variable distribution
/// into derivative-delta coefficients A_{ij}. Verifies p·A = 0 on the
/// knowledge window first. Multi-point supports split via the extended
/// Euclidean algorithm over the rational-function field. With keep_zero the
/// result always has one entry per (support point, order), in p order.
template <class T>
std::vector<DecompEntry<T>> decompose(
    const BiGrid<T>& A, const std::vector<std::pair<LinearMap, long>>& p,
    bool keep_zero = false) {
  {
    BiSeries pw = witness_poly(p, A.var1, A.var2);
    BiGrid<T> killed = grid_mul(pw, A);
    if (killed.w1.lo > killed.w1.hi || killed.w2.lo > killed.w2.hi ||
        killed.wd.lo > killed.wd.hi)
      throw window_too_shallow("decompose: annihilation window is empty");
    for (auto& [kk, v] : killed.c)
      if (!is_zero(v))
        throw annihilation_fails("decompose: p·A is nonzero at (" +
                                 std::to_string(kk.first) + "," +
                                 std::to_string(kk.second) + ")");
  }
  std::vector<DecompEntry<T>> out;
  if (p.empty()) return out;
  if (p.size() == 1) {
    detail::decompose_single(A, p[0].first, p[0].second, out, keep_zero);
    return out;
  }
  // split off the first support point: 1 = u·P + v·Q with P = (x₁-g₁(x₂))^{k₁}
  std::vector<std::pair<LinearMap, long>> rest(p.begin() + 1, p.end());
  Poly<RatFunc> P = detail::witness_factor_rf(p[0].first, p[0].second);
  Poly<RatFunc> Q = Poly<RatFunc>::constant(RatFunc(1));
  for (auto& [g, k] : rest) Q = poly_mul(Q, detail::witness_factor_rf(g, k));
  auto [gcd, u, v] = poly_xgcd(P, Q);
  if (gcd.degree() != 0)
    throw std::invalid_argument("decompose: support points not distinct");
  long span = 0;
  for (auto& [g, k] : p) span += k;
  long floor2 = (A.w2.lo == kNegInf ? A.supp_min2() : A.w2.lo) - 4 * span - 4;
  BiGrid<Rational> VQ = detail::rfpoly_grid(poly_mul(v, Q), floor2, A);
  BiGrid<Rational> UP = detail::rfpoly_grid(poly_mul(u, P), floor2, A);
  BiGrid<T> M1 = grid_mul(VQ, A);
  BiGrid<T> Mrest = grid_mul(UP, A);
  detail::decompose_single(M1, p[0].first, p[0].second, out, keep_zero);
  auto tail = decompose(Mrest, rest, keep_zero);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace qmi

#pragma once

#include "qmi/delta.hpp"
#include "qmi/operator_field.hpp"

#include <functional>
#include <optional>

namespace qmi {

struct compatibility_fails : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Π (x₁ − gᵢ(x₂))^{kᵢ} with multiplicities.
using Witness = std::vector<std::pair<LinearMap, long>>;

inline std::string witness_to_string(const Witness& p) {
  if (p.empty()) return "1";
  std::string s;
  for (auto& [g, k] : p) {
    s += "(x1 - (" + g.str() + ")(x2))";
    if (k != 1) s += "^" + std::to_string(k);
  }
  return s;
}

namespace detail {

/// Demand-driven cells of a(x₁)b(x₂)w and b(x₂)a(x₁)w for one basis vector,
/// nullopt where the truncated module cannot determine them. Cells whose
/// total exponent exceeds the degree ceiling are zero outright: the value
/// would sit in negative degree, which the untruncated module lacks.
struct ProductCells {
  const OperatorField* a;
  const OperatorField* b;
  long w;
  long dtop;
  std::map<std::pair<long, long>, std::optional<Vec>> mab, mba;

  ProductCells(const OperatorField& fa, const OperatorField& fb, long wi)
      : a(&fa), b(&fb), w(wi),
        dtop(fa.mod->degree_of(wi) + fa.c + fb.c - 2) {}

  static std::optional<Vec> apply_cell(const OperatorField& f, long e,
                                       const Vec& v) {
    Vec r = zero_vec(*f.mod);
    for (long j = 0; j < long(v.size()); ++j) {
      if (v(j) == 0) continue;
      const auto& s = f.streams[j];
      if (!s.known_at(e)) return std::nullopt;
      auto it = s.c.find(e);
      if (it != s.c.end()) r += it->second * v(j);
    }
    return r;
  }

  const std::optional<Vec>& ab(long e1, long e2) {
    auto key = std::make_pair(e1, e2);
    auto it = mab.find(key);
    if (it != mab.end()) return it->second;
    std::optional<Vec> val;
    if (e1 + e2 > dtop) {
      val = zero_vec(*a->mod);
    } else {
      const auto& sb = b->streams[w];
      if (sb.known_at(e2)) {
        auto bc = sb.c.find(e2);
        if (bc == sb.c.end())
          val = zero_vec(*a->mod);
        else
          val = apply_cell(*a, e1, bc->second);
      }
    }
    return mab.emplace(key, std::move(val)).first->second;
  }

  const std::optional<Vec>& ba(long e1, long e2) {
    auto key = std::make_pair(e1, e2);
    auto it = mba.find(key);
    if (it != mba.end()) return it->second;
    std::optional<Vec> val;
    if (e1 + e2 > dtop) {
      val = zero_vec(*a->mod);
    } else {
      const auto& sa = a->streams[w];
      if (sa.known_at(e1)) {
        auto ac = sa.c.find(e1);
        if (ac == sa.c.end())
          val = zero_vec(*a->mod);
        else
          val = apply_cell(*b, e2, ac->second);
      }
    }
    return mba.emplace(key, std::move(val)).first->second;
  }
};

inline void require_pair(const OperatorField& a, const OperatorField& b,
                         const char* op) {
  if (a.mod == nullptr || a.mod != b.mod)
    throw std::invalid_argument(std::string(op) + ": fields on different modules");
  if (!a.graded || !b.graded)
    throw std::invalid_argument(std::string(op) + ": fields must be graded");
}

}  // namespace detail

/// [a(x₁), b(x₂)]w as a grid on the honest rectangle ∩ band window. The band
/// floor retreats when stream knowledge runs out before the nominal depth.
/// Per diagonal only the segment where either order can store something is
/// visited; outside it one factor is above its support and the other below,
/// so the cell is known zero.
inline VecBiGrid commutator_grid(const OperatorField& a, const OperatorField& b,
                                 long w) {
  detail::require_pair(a, b, "commutator_grid");
  const GradedModule& mod = *a.mod;
  detail::ProductCells cells(a, b, w);
  const auto& sa = a.streams[w];
  const auto& sb = b.streams[w];
  long s1min = sa.c.empty() ? kPosInf : sa.c.begin()->first;
  long s2min = sb.c.empty() ? kPosInf : sb.c.begin()->first;
  auto sub_lo = [](long d, long h) { return h >= kPosInf ? kNegInf : d - h; };
  auto sub_hi = [](long d, long l) { return l <= kNegInf ? kPosInf : d - l; };
  VecBiGrid K;
  K.region = Region::kXinvY;
  K.w1 = {sa.lo, kPosInf};
  K.w2 = {sb.lo, kPosInf};
  K.wd = {cells.dtop + 1, kPosInf};
  long dlo = mod.degree_of(w) + a.c + b.c - mod.D - 2;
  std::vector<std::tuple<long, long, Vec>> diag;
  for (long d = cells.dtop; d >= dlo; --d) {
    long lo1 = std::max(sa.lo, std::min(s1min, sub_lo(d, sb.hi)));
    long hi1 = std::min(sub_hi(d, sb.lo), std::max(sa.hi, sub_lo(d, s2min)));
    if (lo1 <= kNegInf || hi1 >= kPosInf)
      throw std::invalid_argument("commutator_grid: streams have no finite support bound");
    diag.clear();
    bool complete = true;
    for (long e1 = lo1; e1 <= hi1; ++e1) {
      const auto& vab = cells.ab(e1, d - e1);
      const auto& vba = cells.ba(e1, d - e1);
      if (!vab || !vba) {
        complete = false;
        break;
      }
      Vec v = *vab - *vba;
      if (!is_zero_vec(v)) diag.emplace_back(e1, d - e1, std::move(v));
    }
    if (!complete) break;
    K.wd.lo = d;
    for (auto& [e1, e2, v] : diag) K.c.emplace(std::make_pair(e1, e2), std::move(v));
  }
  return K;
}

/// Minimal-total-degree annihilating product over the candidate support set,
/// multiplicities searched lexicographically up to the bound. Verification is
/// stream equality on every basis vector's knowledge window; absence of a
/// witness within the bound is a result, not an error.
inline std::optional<Witness> locality_witness(
    const OperatorField& a, const OperatorField& b,
    const std::vector<LinearMap>& candidates, long max_multiplicity = 4) {
  detail::require_pair(a, b, "locality_witness");
  const GradedModule& mod = *a.mod;
  std::vector<VecBiGrid> grids;
  grids.reserve(mod.dim());
  for (long w = 0; w < mod.dim(); ++w) grids.push_back(commutator_grid(a, b, w));

  auto passes = [&](const Witness& p) {
    BiSeries pw = witness_poly(p);
    for (const auto& K : grids) {
      VecBiGrid killed = grid_mul(pw, K);
      for (auto& [k, v] : killed.c)
        if (!is_zero(v)) return false;
    }
    return true;
  };

  long nc = long(candidates.size());
  std::vector<long> mult(nc, 0);
  for (long total = 0; total <= max_multiplicity * nc; ++total) {
    std::function<std::optional<Witness>(long, long)> rec =
        [&](long idx, long remaining) -> std::optional<Witness> {
      if (idx == nc) {
        if (remaining != 0) return std::nullopt;
        Witness p;
        for (long i = 0; i < nc; ++i)
          if (mult[i] > 0) p.emplace_back(candidates[i], mult[i]);
        if (passes(p)) return p;
        return std::nullopt;
      }
      for (long k = 0; k <= std::min(max_multiplicity, remaining); ++k) {
        mult[idx] = k;
        if (auto r = rec(idx + 1, remaining - k)) return r;
      }
      mult[idx] = 0;
      return std::nullopt;
    };
    if (nc == 0) {
      if (total == 0 && passes({})) return Witness{};
      return std::nullopt;
    }
    if (auto r = rec(0, total)) return r;
  }
  return std::nullopt;
}

namespace detail {

/// x₀-coefficients of ι_{x⁻¹,x₀}(1/p(x+x₀,x)) for a pure-scaling witness.
/// Every factor is homogeneous of total degree −k there, so the expansion
/// lives on the single diagonal e₀ + e_x = −deg p and a coefficient vector
/// over e₀ describes it completely.
inline std::map<long, Rational> iota_inverse_coeffs(const Witness& p, long e0_max) {
  long shift = 0;
  for (auto& [g, k] : p) {
    if (g.beta != 0)
      throw std::invalid_argument(
          "nth_products: translation support points are not computable on a "
          "truncated module");
    if (g.alpha == 1) shift += k;
  }
  // scaled factors only raise exponents, so the cap (lifted by the pending
  // x₀^{-shift} from the identity-point factors) can prune as we go
  long cap = e0_max + shift;
  std::map<long, Rational> f{{0, Rational(1)}};
  for (auto& [g, k] : p) {
    if (g.alpha == 1) continue;
    Rational base = Rational(1) - g.alpha;
    std::map<long, Rational> conv;
    for (auto& [e, v] : f)
      for (long i = 0; e + i <= cap; ++i) {
        Rational c = v * binomial(-k, i) * pow_rational(base, -k - i);
        if (c == 0) continue;
        auto [it, fresh] = conv.emplace(e + i, c);
        if (!fresh) {
          it->second += c;
          if (it->second == 0) conv.erase(it);
        }
      }
    f = std::move(conv);
  }
  std::map<long, Rational> out;
  for (auto& [e, v] : f)
    if (e - shift <= e0_max) out.emplace(e - shift, v);
  return out;
}

/// All the per-basis machinery of the n-th product definition: the witness
/// multiple M = p·a(x₁)b(x)w with knowledge merged across both operator
/// orders, its substituted grid S at x₁ = x + x₀, and the ceiling scan that
/// realizes the compatibility hypothesis on the window.
struct NthProductCells {
  ProductCells cells;
  std::vector<std::tuple<long, long, Rational>> pmono;
  long N, E1, E2, E1eff, E2eff, dMlo, dMhi;
  std::map<std::pair<long, long>, std::optional<Vec>> mM, mS;

  NthProductCells(const OperatorField& a, const OperatorField& b, long w,
                  const Witness& p)
      : cells(a, b, w) {
    BiSeries pw = witness_poly(p);
    for (auto& [k, v] : pw.c) pmono.emplace_back(k.first, k.second, v);
    N = witness_degree1(p);
    const GradedModule& mod = *a.mod;
    long dw = mod.degree_of(w);
    E1 = dw + a.c - 1 + N;
    E2 = dw + b.c - 1 + N;
    E1eff = a.c + mod.D - 1 + N;
    E2eff = b.c + mod.D - 1 + N;
    dMhi = cells.dtop + N;
    dMlo = dw + a.c + b.c - mod.D - 2 + N;
  }

  std::string where(long e1, long e2) const {
    return "(" + std::to_string(e1) + "," + std::to_string(e2) + ") on basis " +
           cells.a->mod->label(cells.w);
  }

  const std::optional<Vec>& M(long m1, long m2) {
    auto key = std::make_pair(m1, m2);
    auto it = mM.find(key);
    if (it != mM.end()) return it->second;
    std::optional<Vec> vab = zero_vec(*cells.a->mod);
    std::optional<Vec> vba = zero_vec(*cells.a->mod);
    for (auto& [p1, p2, pc] : pmono) {
      if (vab) {
        const auto& c = cells.ab(m1 - p1, m2 - p2);
        if (c)
          *vab += pc * *c;
        else
          vab.reset();
      }
      if (vba) {
        const auto& c = cells.ba(m1 - p1, m2 - p2);
        if (c)
          *vba += pc * *c;
        else
          vba.reset();
      }
      if (!vab && !vba) break;
    }
    if (vab && vba && !coeff_equal(*vab, *vba))
      throw compatibility_fails(
          "nth_products: witness multiples of the two operator orders disagree "
          "at " + where(m1, m2));
    std::optional<Vec> val = vab ? std::move(vab) : std::move(vba);
    return mM.emplace(key, std::move(val)).first->second;
  }

  /// Known cells beyond either single-variable ceiling must vanish; that is
  /// the membership statement for p·a(x₁)b(x) restricted to the window.
  void ceiling_scan() {
    for (long d = dMlo; d <= dMhi; ++d) {
      for (long e1 = E1 + 1; e1 <= E1eff; ++e1) {
        const auto& v = M(e1, d - e1);
        if (v && !is_zero_vec(*v))
          throw compatibility_fails(
              "nth_products: product is not truncated in x1 at " +
              where(e1, d - e1));
      }
      for (long e2 = E2 + 1; e2 <= E2eff; ++e2) {
        const auto& v = M(d - e2, e2);
        if (v && !is_zero_vec(*v))
          throw compatibility_fails(
              "nth_products: product is not truncated in x2 at " +
              where(d - e2, e2));
      }
    }
  }

  /// Coefficient of x₀^i x^e in M(x+x₀, x); binomially redistributed cells of
  /// the diagonal d = i + e, with both tails cut by the ceilings.
  const std::optional<Vec>& S(long i, long e) {
    auto key = std::make_pair(i, e);
    auto it = mS.find(key);
    if (it != mS.end()) return it->second;
    std::optional<Vec> val = zero_vec(*cells.a->mod);
    long d = i + e;
    if (i < 0 || d > dMhi) {
      // structurally zero: no expansion term, or above the degree ceiling
    } else {
      for (long e1 = d - E2; e1 <= E1; ++e1) {
        if (e1 >= 0 && e1 < i) continue;
        const auto& m = M(e1, d - e1);
        if (!m) {
          val.reset();
          break;
        }
        if (!is_zero_vec(*m)) *val += binomial(e1, i) * *m;
      }
    }
    return mS.emplace(key, std::move(val)).first->second;
  }
};

}  // namespace detail

/// a(x)ₙb(x) for n in [n_lo, n_hi], via the generating-function definition:
/// expand 1/p(x+x₀,x) with descending-x coefficients, multiply the
/// substituted witness multiple, and read off x₀-coefficients. Fields that
/// are zero with full knowledge are dropped. Stream windows shrink to what
/// the truncated module determines.
inline std::map<long, OperatorField> nth_products(const OperatorField& a,
                                                  const OperatorField& b,
                                                  const Witness& p,
                                                  long n_lo = kNegInf,
                                                  long n_hi = kNegInf) {
  detail::require_pair(a, b, "nth_products");
  const GradedModule& mod = *a.mod;
  long N = witness_degree1(p);
  if (n_lo == kNegInf) n_lo = -mod.D - 1;
  if (n_hi == kNegInf) n_hi = N + 1;
  if (n_hi < n_lo) throw std::invalid_argument("nth_products: empty mode range");

  long k1tot = 0;
  for (auto& [g, k] : p)
    if (g.alpha == 1) k1tot += k;
  std::map<long, Rational> fc = detail::iota_inverse_coeffs(p, -n_lo - 1);

  std::map<long, OperatorField> out;
  for (long n = n_lo; n <= n_hi; ++n) {
    OperatorField f;
    f.mod = &mod;
    f.c = a.c + b.c + n;
    f.streams.resize(mod.dim());
    out.emplace(n, std::move(f));
  }

  for (long w = 0; w < mod.dim(); ++w) {
    detail::NthProductCells nc(a, b, w, p);
    nc.ceiling_scan();
    long dw = mod.degree_of(w);
    for (long n = n_lo; n <= n_hi; ++n) {
      long e0 = -n - 1;
      long cF = a.c + b.c + n;
      VecSeries s;
      s.var = "x";
      s.hi = stream_top(dw, cF);
      s.lo = s.hi + 1;
      for (long e = s.hi; e >= stream_floor(mod, dw, cF); --e) {
        std::optional<Vec> cell = zero_vec(mod);
        for (auto& [f0, fv] : fc) {
          if (f0 < -k1tot || f0 > e0) continue;
          const auto& sv = nc.S(e0 - f0, e + N + f0);
          if (!sv) {
            cell.reset();
            break;
          }
          if (!is_zero_vec(*sv)) *cell += fv * *sv;
        }
        if (!cell) break;
        s.lo = e;
        if (!is_zero_vec(*cell)) s.c.emplace(e, std::move(*cell));
      }
      out.at(n).streams[w] = std::move(s);
    }
  }

  std::erase_if(out, [&](const auto& kv) {
    const OperatorField& f = kv.second;
    for (long w = 0; w < mod.dim(); ++w) {
      const auto& s = f.streams[w];
      if (!s.c.empty()) return false;
      if (s.lo > stream_floor(mod, mod.degree_of(w), f.c)) return false;
    }
    return true;
  });
  return out;
}

/// Coefficient of (∂/∂x₂)^j x₁⁻¹δ(g(x₂)/x₁), no factorial normalization.
struct OperatorDeltaTerm {
  LinearMap g;
  long j = 0;
  OperatorField coeff;
};

struct OperatorDeltaDistribution {
  std::vector<OperatorDeltaTerm> terms;
};

/// [a(x₁), b(x₂)] decomposed into derivative-delta terms along the support
/// of p. Basis vectors whose window is too shallow for the residue
/// extraction keep the structural ceiling and know nothing below it.
inline OperatorDeltaDistribution commutator_distribution(const OperatorField& a,
                                                         const OperatorField& b,
                                                         const Witness& p) {
  detail::require_pair(a, b, "commutator_distribution");
  const GradedModule& mod = *a.mod;
  long total = 0;
  for (auto& [g, k] : p) total += k;

  std::vector<std::vector<DecompEntry<Vec>>> rows(mod.dim());
  std::vector<bool> shallow(mod.dim(), false);
  for (long w = 0; w < mod.dim(); ++w) {
    VecBiGrid K = commutator_grid(a, b, w);
    try {
      rows[w] = decompose(K, p, true);
    } catch (const annihilation_fails& e) {
      throw annihilation_fails(std::string(e.what()) + " on basis " +
                               mod.label(w));
    } catch (const window_too_shallow&) {
      shallow[w] = true;
    }
  }

  OperatorDeltaDistribution dist;
  long idx = 0;
  for (auto& [g, k] : p) {
    for (long j = 0; j < k; ++j, ++idx) {
      OperatorDeltaTerm t;
      t.g = g;
      t.j = j;
      t.coeff.mod = &mod;
      t.coeff.c = a.c + b.c + j;
      t.coeff.graded = g.beta == 0;
      t.coeff.streams.resize(mod.dim());
      bool stored = false;
      for (long w = 0; w < mod.dim(); ++w) {
        long top = stream_top(mod.degree_of(w), t.coeff.c);
        VecSeries s;
        s.var = "x";
        if (shallow[w]) {
          s.hi = top;
          s.lo = top + 1;
        } else {
          s = std::move(rows[w][idx].coeff);
          s.var = "x";
          if (g.beta == 0 && s.hi == kPosInf) s.hi = top;
        }
        if (!s.c.empty()) stored = true;
        t.coeff.streams[w] = std::move(s);
      }
      if (stored) dist.terms.push_back(std::move(t));
    }
  }
  return dist;
}

/// The translated-product identity on every support point: the order-j
/// coefficient at gᵢ equals −Φ(gᵢ)/j! times the j-th product of a(gᵢ(x))
/// with b(x), and products beyond the multiplicity vanish. Returns
/// discrepancies as messages; empty means the identity held throughout.
inline std::vector<std::string> translated_product_check(const OperatorField& a,
                                                         const OperatorField& b,
                                                         const Witness& p) {
  std::vector<std::string> issues;
  OperatorDeltaDistribution dist = commutator_distribution(a, b, p);
  const GradedModule& mod = *a.mod;
  for (auto& [gi, ki] : p) {
    OperatorField aL = l_action(invert(gi), a);
    Witness pi;
    for (auto& [h, kh] : p) pi.emplace_back(compose(invert(gi), h), kh);
    std::map<long, OperatorField> prods = nth_products(aL, b, pi, 0, ki + 1);
    for (long j = 0; j <= ki + 1; ++j) {
      const OperatorDeltaTerm* term = nullptr;
      for (auto& t : dist.terms)
        if (t.g == gi && t.j == j) term = &t;
      OperatorField expect = prods.count(j)
                                 ? field_scale(prods.at(j),
                                               -phi(gi) / factorial(j))
                                 : field_zero(mod, a.c + b.c + j);
      OperatorField got = term ? term->coeff : field_zero(mod, a.c + b.c + j);
      if (!field_equal(got, expect))
        issues.push_back("order-" + std::to_string(j) +
                         " coefficient at support point " + gi.str() +
                         " does not match the translated product");
    }
  }
  return issues;
}

}  // namespace qmi

#pragma once

#include "qmi/series.hpp"

#include <optional>
#include <vector>

namespace qmi {

inline constexpr long kPosInf = std::numeric_limits<long>::max() / 4;

/// Expansion-domain tags. kPoly marks exact Laurent polynomials, which embed
/// in every region; combining kPoly with a tagged series keeps the tag.
enum class Region { kPoly, kXY, kXinvY, kYinvXinv };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::kPoly: return "poly";
    case Region::kXY: return "x1,x2";
    case Region::kXinvY: return "x1inv,x2";
    case Region::kYinvXinv: return "x2inv,x1inv";
  }
  return "?";
}

struct region_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Knowledge interval for one variable of a grid: coefficients at exponents
/// in [lo, hi] are exact, outside they are unknown. lo = kNegInf / hi =
/// kPosInf mean knowledge extends indefinitely (all-but-finitely-many zeros).
struct VarWindow {
  long lo = 0;
  long hi = -1;
  bool covers(long e) const { return e >= lo && e <= hi; }
  bool covers(long a, long b) const { return lo <= a && b <= hi; }
};

/// Two-variable series with exact coefficients on a knowledge region shaped
/// as rectangle ∩ diagonal band (wd constrains e₁+e₂; products of graded
/// operator streams are known on exactly such regions). Stored cells lie
/// inside the region; an absent in-region cell is exactly zero.
template <class T>
struct BiGrid {
  std::string var1 = "x1", var2 = "x2";
  Region region = Region::kPoly;
  VarWindow w1, w2;
  VarWindow wd{kNegInf, kPosInf};
  std::map<std::pair<long, long>, T> c;

  bool known(long e1, long e2) const {
    return w1.covers(e1) && w2.covers(e2) && wd.covers(e1 + e2);
  }
  T get(long e1, long e2, T dflt = T{}) const {
    auto it = c.find({e1, e2});
    return it == c.end() ? dflt : it->second;
  }
  void add_at(long e1, long e2, const T& v) {
    if (!known(e1, e2) || is_zero(v)) return;
    auto key = std::make_pair(e1, e2);
    auto it = c.find(key);
    if (it == c.end()) {
      c.emplace(key, v);
    } else {
      it->second += v;
      if (is_zero(it->second)) c.erase(it);
    }
  }
  void set(long e1, long e2, T v) {
    if (!known(e1, e2))
      throw std::logic_error("BiGrid::set outside knowledge window");
    if (is_zero(v))
      c.erase({e1, e2});
    else
      c[{e1, e2}] = std::move(v);
  }

  long supp_min1() const {
    if (w1.lo != kNegInf) return w1.lo;
    long m = kPosInf;
    for (auto& [k, v] : c) m = std::min(m, k.first);
    return m == kPosInf ? 0 : m;
  }
  long supp_max1() const {
    if (w1.hi != kPosInf) return w1.hi;
    long m = kNegInf;
    for (auto& [k, v] : c) m = std::max(m, k.first);
    return m == kNegInf ? 0 : m;
  }
  long supp_min2() const {
    if (w2.lo != kNegInf) return w2.lo;
    long m = kPosInf;
    for (auto& [k, v] : c) m = std::min(m, k.second);
    return m == kPosInf ? 0 : m;
  }
  long supp_max2() const {
    if (w2.hi != kPosInf) return w2.hi;
    long m = kNegInf;
    for (auto& [k, v] : c) m = std::max(m, k.second);
    return m == kNegInf ? 0 : m;
  }
  long supp_min_diag() const {
    if (wd.lo != kNegInf) return wd.lo;
    long m = kPosInf;
    for (auto& [k, v] : c) m = std::min(m, k.first + k.second);
    return m == kPosInf ? 0 : m;
  }
  long supp_max_diag() const {
    if (wd.hi != kPosInf) return wd.hi;
    long m = kNegInf;
    for (auto& [k, v] : c) m = std::max(m, k.first + k.second);
    return m == kNegInf ? 0 : m;
  }
  bool empty() const { return c.empty(); }
};

using BiSeries = BiGrid<Rational>;
using VecBiGrid = BiGrid<Vec>;

inline Region combine_region(Region a, Region b, const char* op) {
  if (a == b) return a;
  if (a == Region::kPoly) return b;
  if (b == Region::kPoly) return a;
  throw region_mismatch(std::string(op) + ": regions " + region_name(a) +
                        " and " + region_name(b) + " are incompatible");
}

template <class T>
void check_same_vars(const BiGrid<Rational>& a, const BiGrid<T>& b, const char* op) {
  if (a.var1 != b.var1 || a.var2 != b.var2)
    throw variable_mismatch(std::string(op) + ": variable tags differ");
}

template <class T>
BiGrid<T> grid_add(const BiGrid<T>& a, const BiGrid<T>& b) {
  if (a.var1 != b.var1 || a.var2 != b.var2)
    throw variable_mismatch("grid_add: variable tags differ");
  BiGrid<T> r;
  r.var1 = a.var1;
  r.var2 = a.var2;
  r.region = combine_region(a.region, b.region, "grid_add");
  r.w1 = {std::max(a.w1.lo, b.w1.lo), std::min(a.w1.hi, b.w1.hi)};
  r.w2 = {std::max(a.w2.lo, b.w2.lo), std::min(a.w2.hi, b.w2.hi)};
  r.wd = {std::max(a.wd.lo, b.wd.lo), std::min(a.wd.hi, b.wd.hi)};
  for (auto& [k, v] : a.c) r.add_at(k.first, k.second, v);
  for (auto& [k, v] : b.c) r.add_at(k.first, k.second, v);
  return r;
}

template <class T>
BiGrid<T> grid_scale(BiGrid<T> a, const Rational& s) {
  if (s == 0) {
    a.c.clear();
    return a;
  }
  for (auto& [k, v] : a.c) v = v * s;
  return a;
}

template <class T>
BiGrid<T> grid_sub(const BiGrid<T>& a, const BiGrid<T>& b) {
  return grid_add(a, grid_scale(b, Rational(-1)));
}

namespace detail {
/// Valid knowledge interval of a product in one variable: unknown territory
/// of either factor, shifted by the other factor's support, is polluted.
/// Opposite-sided unknowns in the two factors pollute every exponent.
inline VarWindow mul_window(long lo_a, long hi_a, long smin_a, long smax_a,
                            long lo_b, long hi_b, long smin_b, long smax_b) {
  if ((lo_a != kNegInf && hi_b != kPosInf) || (lo_b != kNegInf && hi_a != kPosInf))
    return {kPosInf, kNegInf};
  long lo = kNegInf, hi = kPosInf;
  if (lo_a != kNegInf) lo = std::max(lo, wadd(lo_a, smax_b));
  if (lo_b != kNegInf) lo = std::max(lo, wadd(lo_b, smax_a));
  auto wsub_hi = [](long h, long s) {
    return (h >= kPosInf || s <= kNegInf) ? kPosInf : h + s;
  };
  if (hi_a != kPosInf) hi = std::min(hi, wsub_hi(hi_a, smin_b));
  if (hi_b != kPosInf) hi = std::min(hi, wsub_hi(hi_b, smin_a));
  return {lo, hi};
}
}  // namespace detail

template <class T>
BiGrid<T> grid_mul(const BiGrid<Rational>& a, const BiGrid<T>& b) {
  check_same_vars(a, b, "grid_mul");
  BiGrid<T> r;
  r.var1 = a.var1;
  r.var2 = a.var2;
  r.region = combine_region(a.region, b.region, "grid_mul");
  r.w1 = detail::mul_window(a.w1.lo, a.w1.hi, a.supp_min1(), a.supp_max1(),
                            b.w1.lo, b.w1.hi, b.supp_min1(), b.supp_max1());
  r.w2 = detail::mul_window(a.w2.lo, a.w2.hi, a.supp_min2(), a.supp_max2(),
                            b.w2.lo, b.w2.hi, b.supp_min2(), b.supp_max2());
  r.wd = detail::mul_window(a.wd.lo, a.wd.hi, a.supp_min_diag(), a.supp_max_diag(),
                            b.wd.lo, b.wd.hi, b.supp_min_diag(), b.supp_max_diag());
  if (r.w1.lo > r.w1.hi || r.w2.lo > r.w2.hi || r.wd.lo > r.wd.hi) {
    r.c.clear();
    return r;
  }
  for (auto& [ka, va] : a.c)
    for (auto& [kb, vb] : b.c)
      r.add_at(ka.first + kb.first, ka.second + kb.second, va * vb);
  return r;
}

template <class T>
bool grid_covers(const BiGrid<T>& a, long lo1, long hi1, long lo2, long hi2) {
  return a.w1.covers(lo1, hi1) && a.w2.covers(lo2, hi2) &&
         a.wd.covers(lo1 + lo2, hi1 + hi2);
}

template <class T>
bool grid_equal_on(const BiGrid<T>& a, const BiGrid<T>& b, long lo1, long hi1,
                   long lo2, long hi2) {
  if (!grid_covers(a, lo1, hi1, lo2, hi2) || !grid_covers(b, lo1, hi1, lo2, hi2))
    throw window_too_shallow("grid_equal_on: knowledge window does not cover range");
  for (long e1 = lo1; e1 <= hi1; ++e1)
    for (long e2 = lo2; e2 <= hi2; ++e2) {
      T va = a.get(e1, e2), vb = b.get(e1, e2);
      bool za = is_zero(va), zb = is_zero(vb);
      if (za != zb) return false;
      if (!za && !coeff_equal(va, vb)) return false;
    }
  return true;
}

template <class T>
bool grid_zero_on(const BiGrid<T>& a, long lo1, long hi1, long lo2, long hi2) {
  if (!grid_covers(a, lo1, hi1, lo2, hi2))
    throw window_too_shallow("grid_zero_on: knowledge window does not cover range");
  for (auto& [k, v] : a.c)
    if (k.first >= lo1 && k.first <= hi1 && k.second >= lo2 && k.second <= hi2 &&
        !is_zero(v))
      return false;
  return true;
}

/// Row at x₁-exponent e1 as a series in the second variable, carrying the
/// row's honest knowledge window (rectangle ∩ diagonal band).
template <class T>
TSeries<T> grid_row(const BiGrid<T>& g, long e1) {
  TSeries<T> r;
  r.var = g.var2;
  r.lo = std::max(g.w2.lo, g.wd.lo == kNegInf ? kNegInf : g.wd.lo - e1);
  r.hi = std::min(g.w2.hi, g.wd.hi == kPosInf ? kPosInf : g.wd.hi - e1);
  if (!g.w1.covers(e1)) {
    r.lo = 0;
    r.hi = -1;
    return r;
  }
  auto it = g.c.lower_bound({e1, r.lo == kNegInf ? std::numeric_limits<long>::min() : r.lo});
  for (; it != g.c.end() && it->first.first == e1; ++it)
    if (it->first.second <= r.hi) r.c.emplace(it->first.second, it->second);
  return r;
}

/// Substitute x₂ ↦ g(x₂) row by row (the first variable is untouched).
template <class T>
BiGrid<T> grid_substitute_var2(const BiGrid<T>& a, const LinearMap& g) {
  BiGrid<T> r;
  r.var1 = a.var1;
  r.var2 = a.var2;
  r.region = a.region;
  r.w1 = a.w1;
  r.w2 = a.w2;
  r.wd = a.wd;
  if (a.w1.lo == kNegInf || a.w1.hi == kPosInf) {
    long smin = a.supp_min1(), smax = a.supp_max1();
    if (a.w1.lo == kNegInf) r.w1.lo = smin;
    if (a.w1.hi == kPosInf) r.w1.hi = smax;
  }
  for (long e1 = r.w1.lo; e1 <= r.w1.hi; ++e1) {
    TSeries<T> row = grid_row(a, e1);
    if (row.lo > row.hi && row.c.empty()) continue;
    TSeries<T> sub = substitute_linear(row, g);
    for (auto& [e2, v] : sub.c) r.add_at(e1, e2, v);
  }
  r.w1 = a.w1;
  return r;
}

/// Exact Laurent polynomial as a grid (fully known plane).
inline BiSeries poly2(std::string var1, std::string var2,
                      std::vector<std::tuple<long, long, Rational>> monomials) {
  BiSeries p;
  p.var1 = std::move(var1);
  p.var2 = std::move(var2);
  p.region = Region::kPoly;
  p.w1 = {kNegInf, kPosInf};
  p.w2 = {kNegInf, kPosInf};
  for (auto& [e1, e2, v] : monomials) p.add_at(e1, e2, v);
  return p;
}

/// Π (x₁ − gᵢ(x₂))^{kᵢ} expanded exactly.
inline BiSeries witness_poly(const std::vector<std::pair<LinearMap, long>>& factors,
                             std::string var1 = "x1", std::string var2 = "x2") {
  BiSeries p = poly2(var1, var2, {{0, 0, Rational(1)}});
  for (auto& [g, k] : factors) {
    BiSeries f = poly2(var1, var2, {{1, 0, Rational(1)}});
    f.add_at(0, 1, -g.alpha);
    f.add_at(0, 0, -g.beta);
    for (long i = 0; i < k; ++i) p = grid_mul(f, p);
  }
  return p;
}

inline long witness_degree1(const std::vector<std::pair<LinearMap, long>>& factors) {
  long d = 0;
  for (auto& [g, k] : factors) d += k;
  return d;
}

/// ι-expansion of numerator / Π(x₁−gᵢ(x₂))^{kᵢ} in the tagged region. All
/// three regions admit the descending-x₁ expansion of these factors; the tag
/// is recorded and enforced by later arithmetic. depth1 bounds how far below
/// its leading x₁-exponent each inverse factor is expanded.
inline BiSeries iota_expand(const BiSeries& numerator,
                            const std::vector<std::pair<LinearMap, long>>& denominator,
                            Region region, long depth1) {
  BiSeries acc = numerator;
  for (auto& [g, k] : denominator) {
    BiSeries f;
    f.var1 = acc.var1;
    f.var2 = acc.var2;
    f.region = Region::kPoly;
    long floor1 = -k - depth1;
    f.w1 = {floor1, kPosInf};
    f.w2 = {kNegInf, kPosInf};
    // (x₁ − g(x₂))^{-k} = Σ_{i≥0} C(k+i-1, i) g(x₂)^i x₁^{-k-i}
    for (long i = 0; -k - i >= floor1; ++i) {
      Rational bin = binomial(k + i - 1, i);
      WindowedSeries gpow = power_expand(g, i, kNegInf, acc.var2);
      for (auto& [e2, v] : gpow.c) f.add_at(-k - i, e2, bin * v);
    }
    acc = grid_mul(f, acc);
  }
  acc.region = region;
  return acc;
}

}  // namespace qmi

#pragma once

#include "qmi/linear_map.hpp"
#include "qmi/rational.hpp"

#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace qmi {

/// Floor value meaning "known exactly at all lower exponents" (polynomials,
/// identically-zero tails). Chosen so window arithmetic cannot overflow.
inline constexpr long kNegInf = std::numeric_limits<long>::min() / 4;

inline long wadd(long a, long b) {
  return (a <= kNegInf || b <= kNegInf) ? kNegInf : a + b;
}

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(const Vec& v) { return is_zero_vec(v); }

inline bool coeff_equal(const Rational& a, const Rational& b) { return a == b; }
inline bool coeff_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return is_zero(a) && is_zero(b);
  return is_zero_vec(a - b);
}

struct window_too_shallow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct variable_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A formal series known exactly on the exponent window [lo, hi]:
/// exponents above hi carry coefficient 0, exponents below lo are unknown,
/// and an exponent inside the window absent from the map is exactly 0.
template <class T>
struct TSeries {
  std::string var = "x";
  long lo = 0;
  long hi = -1;  // lo > hi encodes "known zero on the (empty) window"
  std::map<long, T> c;

  bool known_at(long e) const { return e >= lo; }
  T get(long e, T dflt = T{}) const {
    auto it = c.find(e);
    return it == c.end() ? dflt : it->second;
  }
  void set(long e, T v) {
    if (e < lo || e > hi) {
      if (is_zero(v)) return;
      throw std::logic_error("TSeries::set outside window");
    }
    if (is_zero(v))
      c.erase(e);
    else
      c[e] = std::move(v);
  }
  void add_at(long e, const T& v) {
    if (e > hi || is_zero(v)) return;
    if (e < lo) return;  // below the knowledge floor: discarded by contract
    auto it = c.find(e);
    if (it == c.end()) {
      c.emplace(e, v);
    } else {
      it->second += v;
      if (is_zero(it->second)) c.erase(it);
    }
  }
  bool is_zero_series() const { return c.empty(); }
};

using WindowedSeries = TSeries<Rational>;
using VecSeries = TSeries<Vec>;

template <class T>
TSeries<T> series_zero(std::string var, long lo, long hi) {
  TSeries<T> r;
  r.var = std::move(var);
  r.lo = lo;
  r.hi = hi;
  return r;
}

template <class T>
TSeries<T> series_add(const TSeries<T>& a, const TSeries<T>& b) {
  if (a.var != b.var) throw variable_mismatch("series_add: " + a.var + " vs " + b.var);
  TSeries<T> r;
  r.var = a.var;
  r.lo = std::max(a.lo, b.lo);
  r.hi = std::max(a.hi, b.hi);
  for (auto& [e, v] : a.c) r.add_at(e, v);
  for (auto& [e, v] : b.c) r.add_at(e, v);
  return r;
}

template <class T>
TSeries<T> series_scale(TSeries<T> a, const Rational& s) {
  if (s == 0) {
    a.c.clear();
    return a;
  }
  for (auto& [e, v] : a.c) v = v * s;
  return a;
}

template <class T>
TSeries<T> series_neg(TSeries<T> a) {
  return series_scale(std::move(a), Rational(-1));
}

template <class T>
TSeries<T> series_sub(const TSeries<T>& a, const TSeries<T>& b) {
  return series_add(a, series_neg(b));
}

template <class T>
TSeries<T> series_shift(TSeries<T> a, long k) {
  TSeries<T> r;
  r.var = a.var;
  r.lo = wadd(a.lo, k);
  r.hi = wadd(a.hi, k);
  for (auto& [e, v] : a.c) r.c.emplace(e + k, std::move(v));
  return r;
}

/// Raise the knowledge floor (forget coefficients below lo2).
template <class T>
TSeries<T> series_truncate(TSeries<T> a, long lo2) {
  if (lo2 <= a.lo) return a;
  a.c.erase(a.c.begin(), a.c.lower_bound(lo2));
  a.lo = lo2;
  return a;
}

/// Product with the window-propagation rule: the result is exact down to the
/// largest exponent an unknown low-order term of either factor could reach.
template <class T>
TSeries<T> window_mul(const TSeries<Rational>& a, const TSeries<T>& b) {
  if (a.var != b.var) throw variable_mismatch("window_mul: " + a.var + " vs " + b.var);
  TSeries<T> r;
  r.var = a.var;
  r.hi = wadd(a.hi, b.hi);
  r.lo = std::max(wadd(a.lo, b.hi), wadd(b.lo, a.hi));
  if (r.lo == kNegInf && r.hi == kNegInf) {
    return r;  // product of exact zeros
  }
  for (auto& [ea, va] : a.c)
    for (auto& [eb, vb] : b.c) r.add_at(ea + eb, va * vb);
  return r;
}

/// Expansion of (alpha x + beta)^n as a series in descending powers of x,
/// exact for n >= 0, truncated at `floor` otherwise.
inline WindowedSeries power_expand(const LinearMap& g, long n, long floor = kNegInf,
                                   std::string var = "x") {
  WindowedSeries r;
  r.var = std::move(var);
  r.hi = n;
  if (n >= 0 && g.beta == 0) {
    r.lo = kNegInf;
    r.c[n] = pow_rational(g.alpha, n);
    return r;
  }
  if (n >= 0) {
    r.lo = kNegInf;
    for (long i = 0; i <= n; ++i) {
      Rational v = binomial(n, i) * pow_rational(g.alpha, n - i);
      for (long k = 0; k < i; ++k) v *= g.beta;
      if (v != 0) r.c[n - i] = v;
    }
    return r;
  }
  if (floor == kNegInf)
    throw std::invalid_argument("power_expand: negative power needs a finite floor");
  if (floor > n) throw std::invalid_argument("power_expand: floor must be <= n");
  r.lo = floor;
  if (g.beta == 0) {
    r.c[n] = pow_rational(g.alpha, n);
    return r;
  }
  for (long i = 0; n - i >= floor; ++i) {
    Rational v = binomial(n, i) * pow_rational(g.alpha, n - i);
    for (long k = 0; k < i; ++k) v *= g.beta;
    if (v != 0) r.c[n - i] = v;
  }
  return r;
}

/// a(g(x)). For beta = 0 this is the exact rescaling by alpha^e; otherwise the
/// window is preserved, and an exact series with negative-exponent support
/// must supply `floor_req` (the expansion no longer terminates).
template <class T>
TSeries<T> substitute_linear(const TSeries<T>& a, const LinearMap& g,
                             long floor_req = kNegInf) {
  TSeries<T> r;
  r.var = a.var;
  r.hi = a.hi;
  if (g.beta == 0) {
    r.lo = a.lo;
    for (auto& [e, v] : a.c) r.c.emplace(e, v * pow_rational(g.alpha, e));
    return r;
  }
  long lo = a.lo;
  if (lo == kNegInf) {
    bool neg = !a.c.empty() && a.c.begin()->first < 0;
    if (neg) {
      if (floor_req == kNegInf)
        throw std::invalid_argument(
            "substitute_linear: infinite descending expansion needs a floor");
      lo = floor_req;
    }
  } else if (floor_req != kNegInf) {
    lo = std::max(lo, floor_req);
  }
  r.lo = lo;
  if (r.hi == kNegInf) return r;
  for (auto& [n, v] : a.c) {
    long e_top = std::min(n, r.hi);
    long e_bot = (n >= 0 && r.lo == kNegInf) ? 0 : r.lo;
    for (long e = e_top; e >= e_bot; --e) {
      if (n >= 0 && e < 0) break;
      Rational coef = binomial(n, n - e) * pow_rational(g.alpha, e);
      for (long k = 0; k < n - e; ++k) coef *= g.beta;
      if (coef != 0) r.add_at(e, v * coef);
    }
  }
  return r;
}

/// Coefficient of x^{-1}; requires the window to reach it.
template <class T>
T residue(const TSeries<T>& a, T dflt = T{}) {
  if (a.lo > -1)
    throw window_too_shallow("residue: window floor " + std::to_string(a.lo) +
                             " does not reach exponent -1");
  return a.get(-1, std::move(dflt));
}

template <class T>
TSeries<T> derivative(const TSeries<T>& a) {
  TSeries<T> r;
  r.var = a.var;
  r.lo = wadd(a.lo, -1);
  r.hi = wadd(a.hi, -1);
  for (auto& [e, v] : a.c) {
    if (e == 0) continue;
    r.c.emplace(e - 1, v * Rational(e));
  }
  return r;
}

/// Exact equality of coefficients on [lo, hi]; both series must know the
/// range. Scans stored keys, so infinite windows compare in finite time.
template <class T>
bool series_equal_on(const TSeries<T>& a, const TSeries<T>& b, long lo, long hi) {
  if (a.lo > lo || b.lo > lo)
    throw window_too_shallow("series_equal_on: window does not cover comparison range");
  auto same_at = [&](long e) {
    T va = a.get(e), vb = b.get(e);
    bool za = is_zero(va), zb = is_zero(vb);
    if (za != zb) return false;
    return za || coeff_equal(va, vb);
  };
  for (auto it = a.c.lower_bound(lo); it != a.c.end() && it->first <= hi; ++it)
    if (!same_at(it->first)) return false;
  for (auto it = b.c.lower_bound(lo); it != b.c.end() && it->first <= hi; ++it)
    if (!same_at(it->first)) return false;
  return true;
}

template <class T>
bool series_zero_on(const TSeries<T>& a, long lo, long hi) {
  if (a.lo > lo)
    throw window_too_shallow("series_zero_on: window does not cover range");
  for (auto it = a.c.lower_bound(lo); it != a.c.end() && it->first <= hi; ++it)
    if (!is_zero(it->second)) return false;
  return true;
}

}  // namespace qmi

#pragma once

#include "qmi/series.hpp"

#include <vector>

namespace qmi {

/// Dense univariate polynomial over a field F; c[i] is the x^i coefficient,
/// trailing zeros stripped (zero polynomial has empty c).
template <class F>
struct Poly {
  std::vector<F> c;

  static Poly zero() { return {}; }
  static Poly constant(F v) {
    Poly p;
    if (!(v == F(0))) p.c = {std::move(v)};
    return p;
  }
  long degree() const { return static_cast<long>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  F coeff(long i) const {
    return (i >= 0 && i < static_cast<long>(c.size())) ? c[i] : F(0);
  }
  void normalize() {
    while (!c.empty() && c.back() == F(0)) c.pop_back();
  }
  F lead() const { return c.back(); }
};

template <class F>
bool operator==(const Poly<F>& a, const Poly<F>& b) {
  if (a.c.size() != b.c.size()) return false;
  for (size_t i = 0; i < a.c.size(); ++i)
    if (!(a.c[i] == b.c[i])) return false;
  return true;
}

template <class F>
Poly<F> poly_add(const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r;
  r.c.resize(std::max(a.c.size(), b.c.size()), F(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = r.c[i] + a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  r.normalize();
  return r;
}

template <class F>
Poly<F> poly_scale(Poly<F> a, const F& s) {
  if (s == F(0)) return {};
  for (auto& v : a.c) v = v * s;
  return a;
}

template <class F>
Poly<F> poly_sub(const Poly<F>& a, const Poly<F>& b) {
  return poly_add(a, poly_scale(b, F(-1)));
}

template <class F>
Poly<F> poly_mul(const Poly<F>& a, const Poly<F>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly<F> r;
  r.c.resize(a.c.size() + b.c.size() - 1, F(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
  r.normalize();
  return r;
}

template <class F>
std::pair<Poly<F>, Poly<F>> poly_divmod(Poly<F> a, const Poly<F>& b) {
  if (b.is_zero()) throw std::invalid_argument("poly_divmod: division by zero");
  Poly<F> q;
  if (a.degree() >= b.degree()) q.c.resize(a.degree() - b.degree() + 1, F(0));
  while (!a.is_zero() && a.degree() >= b.degree()) {
    long shift = a.degree() - b.degree();
    F f = a.lead() / b.lead();
    q.c[shift] = q.c[shift] + f;
    for (size_t i = 0; i < b.c.size(); ++i)
      a.c[shift + i] = a.c[shift + i] - f * b.c[i];
    a.normalize();
  }
  q.normalize();
  return {q, a};
}

template <class F>
Poly<F> poly_monic(Poly<F> a) {
  if (a.is_zero()) return a;
  F inv = F(1) / a.lead();
  return poly_scale(std::move(a), inv);
}

template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    a = b;
    b = r;
  }
  return poly_monic(a);
}

/// Extended Euclid: returns (g, u, v) with u·a + v·b = g = monic gcd(a,b).
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> poly_xgcd(Poly<F> a, Poly<F> b) {
  Poly<F> u0 = Poly<F>::constant(F(1)), v0, u1, v1 = Poly<F>::constant(F(1));
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    a = b;
    b = r;
    Poly<F> u2 = poly_sub(u0, poly_mul(q, u1));
    Poly<F> v2 = poly_sub(v0, poly_mul(q, v1));
    u0 = u1;
    v0 = v1;
    u1 = u2;
    v1 = v2;
  }
  if (a.is_zero()) return {a, u0, v0};
  F inv = F(1) / a.lead();
  return {poly_scale(a, inv), poly_scale(u0, inv), poly_scale(v0, inv)};
}

using RPoly = Poly<Rational>;

inline RPoly rpoly(std::initializer_list<Rational> ascending) {
  RPoly p;
  p.c = ascending;
  p.normalize();
  return p;
}

/// x − following a LinearMap: the factor (x − g(y)) seen as a polynomial in
/// one variable is not representable here; this is the univariate g(x).
inline RPoly rpoly_linear(const LinearMap& g) {
  RPoly p;
  p.c = {g.beta, g.alpha};
  p.normalize();
  return p;
}

/// Rational function num/den over Q in one variable, gcd-reduced, den monic.
struct RatFunc {
  RPoly num, den = RPoly::constant(Rational(1));

  RatFunc() = default;
  RatFunc(int v) : num(RPoly::constant(Rational(v))) {}
  RatFunc(Rational v) : num(RPoly::constant(std::move(v))) {}
  RatFunc(RPoly n) : num(std::move(n)) {}
  RatFunc(RPoly n, RPoly d) : num(std::move(n)), den(std::move(d)) { reduce(); }

  void reduce() {
    if (den.is_zero()) throw std::invalid_argument("RatFunc: zero denominator");
    if (num.is_zero()) {
      den = RPoly::constant(Rational(1));
      return;
    }
    RPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = poly_divmod(num, g).first;
      den = poly_divmod(den, g).first;
    }
    Rational lead = den.lead();
    if (lead != 1) {
      Rational inv = Rational(1) / lead;
      num = poly_scale(num, inv);
      den = poly_scale(den, inv);
    }
  }
  bool is_zero() const { return num.is_zero(); }
};

inline RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                 poly_mul(a.den, b.den));
}
inline RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  return RatFunc(poly_sub(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                 poly_mul(a.den, b.den));
}
inline RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}
inline RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::invalid_argument("RatFunc: division by zero");
  return RatFunc(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
}
inline bool operator==(const RatFunc& a, const RatFunc& b) {
  return poly_sub(poly_mul(a.num, b.den), poly_mul(b.num, a.den)).is_zero();
}

/// Expansion of a rational function in descending powers (the x-large
/// embedding into C((x⁻¹))), truncated at `floor`.
inline WindowedSeries ratfunc_expand_desc(const RatFunc& r, long floor,
                                          std::string var = "x") {
  WindowedSeries out;
  out.var = std::move(var);
  out.lo = floor;
  if (r.is_zero()) {
    out.lo = kNegInf;
    out.hi = 0;
    return out;
  }
  long dn = r.num.degree(), dd = r.den.degree();
  out.hi = dn - dd;
  std::map<long, Rational> rem;
  for (long i = 0; i <= dn; ++i)
    if (r.num.coeff(i) != 0) rem[i] = r.num.coeff(i);
  Rational lead = r.den.lead();
  for (long e = out.hi; e >= floor; --e) {
    auto it = rem.find(e + dd);
    if (it == rem.end()) continue;
    Rational coef = it->second / lead;
    out.c[e] = coef;
    for (long i = 0; i <= dd; ++i) {
      Rational dv = r.den.coeff(i);
      if (dv == 0) continue;
      long key = e + i;
      auto jt = rem.find(key);
      if (jt == rem.end()) {
        if (i < dd) rem[key] = -coef * dv;
      } else {
        jt->second -= coef * dv;
        if (jt->second == 0) rem.erase(jt);
      }
    }
  }
  return out;
}

}  // namespace qmi

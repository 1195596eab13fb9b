#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmi/biseries.hpp"
#include "qmi/poly.hpp"
#include "qmi/series.hpp"

using namespace qmi;

namespace {

// Independent expansion of (x+1)^{-1} in descending powers, straight from the
// alternating geometric series. Ground truth for the substitution oracles.
WindowedSeries inv_x_plus_1(long floor) {
  WindowedSeries s;
  s.lo = floor;
  s.hi = -1;
  Rational sign(1);
  for (long e = -1; e >= floor; --e) {
    s.c[e] = sign;
    sign = -sign;
  }
  return s;
}

WindowedSeries mono(long e, Rational v) {
  WindowedSeries s;
  s.lo = kNegInf;
  s.hi = e;
  if (v != 0) s.c[e] = std::move(v);
  return s;
}

WindowedSeries from_terms(long lo, std::vector<std::pair<long, Rational>> ts) {
  WindowedSeries s;
  s.lo = lo;
  s.hi = lo - 1;
  for (auto& [e, v] : ts) s.hi = std::max(s.hi, e);
  for (auto& [e, v] : ts)
    if (v != 0) s.c[e] = v;
  return s;
}

WindowedSeries random_tail(std::mt19937_64& rng, long lo, long hi) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  WindowedSeries s;
  s.lo = lo;
  s.hi = hi;
  for (long e = lo; e <= hi; ++e) {
    Rational v(num(rng), den(rng));
    if (v != 0) s.c[e] = v;
  }
  return s;
}

}  // namespace

TEST_CASE("linear map group structure") {
  LinearMap g(2, 1), h(3, -2);
  CHECK(compose(g, invert(g)).is_identity());
  CHECK(compose(invert(g), g).is_identity());
  CHECK(compose(g, h) == LinearMap(6, -3));
  CHECK(phi(compose(g, h)) == phi(g) * phi(h));
  CHECK(g(Rational(5)) == 11);
  CHECK(invert(g)(g(Rational(7, 3))) == Rational(7, 3));
  CHECK_THROWS_AS(LinearMap(0, 1), std::invalid_argument);
}

TEST_CASE("power_expand leading term and negative powers") {
  for (auto g : {LinearMap(2, 0), LinearMap(1, 1), LinearMap(3, -2), LinearMap(-1, 0)}) {
    for (long n = -3; n <= 3; ++n) {
      WindowedSeries p = power_expand(g, n, -9);
      CHECK(p.get(n) == pow_rational(g.alpha, n));
      for (auto& [e, v] : p.c) CHECK(e <= n);
    }
  }
  WindowedSeries q = power_expand(LinearMap(1, 1), -2, -5);
  CHECK(q.get(-2) == 1);
  CHECK(q.get(-3) == -2);
  CHECK(q.get(-4) == 3);
  CHECK(q.get(-5) == -4);
  WindowedSeries inv = inv_x_plus_1(-6);
  WindowedSeries sq = window_mul(inv, inv);
  CHECK(series_equal_on(q, sq, -5, -2));
}

TEST_CASE("power_expand is multiplicative in the exponent") {
  for (auto g : {LinearMap(2, 0), LinearMap(1, 1), LinearMap(3, -2), LinearMap(-1, 0)}) {
    for (long m = -3; m <= 3; ++m)
      for (long n = -3; n <= 3; ++n) {
        WindowedSeries lhs = power_expand(g, m + n, -9);
        WindowedSeries prod =
            window_mul(power_expand(g, m, -9), power_expand(g, n, -9));
        long lo = std::max(lhs.lo, prod.lo);
        long hi = std::min(lhs.hi, prod.hi);
        REQUIRE(lo <= hi);
        CHECK(series_equal_on(lhs, prod, lo, hi));
      }
  }
}

TEST_CASE("window_mul convolution and window rule") {
  WindowedSeries a = from_terms(-4, {{-1, 1}, {-2, -1}, {-3, 1}, {-4, -1}});
  WindowedSeries xp1 = from_terms(kNegInf, {{1, 1}, {0, 1}});
  WindowedSeries prod = window_mul(a, xp1);
  CHECK(prod.lo == -3);
  CHECK(prod.hi == 0);
  CHECK(series_equal_on(prod, mono(0, 1), -3, 1));

  WindowedSeries one = mono(0, 1);
  WindowedSeries u = window_mul(one, a);
  CHECK(u.lo == a.lo);
  CHECK(u.hi == a.hi);
  CHECK(series_equal_on(u, a, a.lo, a.hi));

  WindowedSeries other = from_terms(0, {{0, 1}});
  other.var = "y";
  CHECK_THROWS_AS(window_mul(a, other), variable_mismatch);
}

TEST_CASE("window_mul leakage boundary") {
  // (floor -5, ceil -1) x (floor 0, ceil 1) -> floor max(-5+1, 0-1) = -1
  WindowedSeries a = from_terms(-5, {{-1, 2}, {-3, 1}, {-5, -4}});
  WindowedSeries b = from_terms(0, {{0, 3}, {1, 1}});
  WindowedSeries p = window_mul(a, b);
  CHECK(p.lo == -1);
  CHECK(p.hi == 0);

  // perturb each factor below its floor: products agree at exponents >= -1
  WindowedSeries a2 = a;
  a2.lo = -6;
  a2.c[-6] = 7;
  WindowedSeries b2 = b;
  b2.lo = -1;
  b2.c[-1] = 11;
  for (auto& [pa, pb] : std::vector<std::pair<WindowedSeries, WindowedSeries>>{
           {a2, b}, {a, b2}, {a2, b2}}) {
    WindowedSeries q = window_mul(pa, pb);
    CHECK(series_equal_on(p, q, -1, 1));
  }
}

TEST_CASE("window_mul ring laws on samples") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 20; ++it) {
    WindowedSeries a = random_tail(rng, -6, 2);
    WindowedSeries b = random_tail(rng, -5, 1);
    WindowedSeries c = random_tail(rng, -4, 3);
    WindowedSeries ab = window_mul(a, b), ba = window_mul(b, a);
    CHECK(ab.lo == ba.lo);
    CHECK(ab.hi == ba.hi);
    CHECK(series_equal_on(ab, ba, ab.lo, ab.hi));
    WindowedSeries l = window_mul(ab, c), r = window_mul(a, window_mul(b, c));
    long lo = std::max(l.lo, r.lo);
    CHECK(series_equal_on(l, r, lo, l.hi));
    WindowedSeries d1 = window_mul(a, series_add(b, c));
    WindowedSeries d2 = series_add(window_mul(a, b), window_mul(a, c));
    lo = std::max(d1.lo, d2.lo);
    CHECK(series_equal_on(d1, d2, lo, std::min(d1.hi, d2.hi) + 2));
  }
}

TEST_CASE("substitute_linear examples") {
  WindowedSeries xinv = mono(-1, 1);
  WindowedSeries s = substitute_linear(xinv, LinearMap(1, 1), -7);
  CHECK(series_equal_on(s, inv_x_plus_1(-7), -7, -1));

  std::mt19937_64 rng(3);
  WindowedSeries a = random_tail(rng, -5, 4);
  WindowedSeries r2 = substitute_linear(a, LinearMap(2, 0));
  for (long e = a.lo; e <= a.hi; ++e)
    CHECK(r2.get(e) == a.get(e) * pow_rational(Rational(2), e));
  CHECK(r2.lo == a.lo);
  CHECK(r2.hi == a.hi);
}

TEST_CASE("substitute_linear is a ring homomorphism") {
  WindowedSeries a = mono(-1, 1);
  WindowedSeries b = mono(-2, 1);
  LinearMap g(1, 1);
  WindowedSeries lhs = substitute_linear(window_mul(a, b), g, -8);
  WindowedSeries rhs =
      window_mul(substitute_linear(a, g, -8), substitute_linear(b, g, -8));
  long lo = std::max(lhs.lo, rhs.lo);
  long hi = std::min(lhs.hi, rhs.hi);
  REQUIRE(lo <= hi);
  CHECK(series_equal_on(lhs, rhs, lo, hi));
}

TEST_CASE("substitute_linear round trip") {
  std::mt19937_64 rng(11);
  for (auto g : {LinearMap(2, 1), LinearMap(1, -1), LinearMap(-3, 2)}) {
    WindowedSeries a = random_tail(rng, -6, 3);
    WindowedSeries rt = substitute_linear(substitute_linear(a, g), invert(g));
    CHECK(rt.lo == a.lo);
    CHECK(series_equal_on(rt, a, a.lo, a.hi));
  }
}

TEST_CASE("residue") {
  CHECK(residue(mono(-1, 1)) == 1);
  WindowedSeries a = from_terms(-5, {{-2, 1}, {-5, 3}});
  CHECK(residue(derivative(a)) == 0);
  CHECK(residue(inv_x_plus_1(-4)) == 1);
  CHECK(residue(power_expand(LinearMap(1, 1), -1, -4)) == 1);
  CHECK_THROWS_AS(residue(from_terms(0, {{0, 1}})), window_too_shallow);
}

TEST_CASE("derivative rules") {
  WindowedSeries x3 = mono(3, 1);
  WindowedSeries d = derivative(x3);
  CHECK(d.get(2) == 3);
  CHECK(d.is_zero_series() == false);
  CHECK(series_equal_on(d, mono(2, 3), -2, 3));

  WindowedSeries a = mono(-1, 1);
  WindowedSeries b = from_terms(kNegInf, {{2, 1}, {0, 1}});
  WindowedSeries lhs = derivative(window_mul(a, b));
  WindowedSeries rhs = series_add(window_mul(derivative(a), b),
                                  window_mul(a, derivative(b)));
  long lo = std::max(lhs.lo, rhs.lo);
  CHECK(series_equal_on(lhs, rhs, lo, std::max(lhs.hi, rhs.hi)));

  LinearMap g(2, 1);
  WindowedSeries chain = derivative(substitute_linear(a, g, -7));
  WindowedSeries expect =
      series_scale(substitute_linear(derivative(a), g, -8), g.alpha);
  lo = std::max(chain.lo, expect.lo);
  CHECK(series_equal_on(chain, expect, lo, std::min(chain.hi, expect.hi)));
}

TEST_CASE("integration by parts") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 25; ++it) {
    WindowedSeries a = random_tail(rng, -5, 3);
    WindowedSeries b = random_tail(rng, -4, 2);
    Rational l = residue(window_mul(a, derivative(b)));
    Rational r = residue(window_mul(derivative(a), b));
    CHECK(l == -r);
  }
}

TEST_CASE("iota_expand geometric regions") {
  BiSeries num = poly2("x1", "x2", {{0, 0, Rational(1)}});
  BiSeries e = iota_expand(num, {{LinearMap(1, 0), 1}}, Region::kXY, 8);
  for (long k = 0; k <= 7; ++k) CHECK(e.get(-k - 1, k) == 1);
  CHECK(e.get(-1, 1) == 0);
  CHECK(e.region == Region::kXY);

  // 1/(x+x0) in the region of descending x: alternating signs
  BiSeries num2 = poly2("x", "x0", {{0, 0, Rational(1)}});
  BiSeries f = iota_expand(num2, {{LinearMap(-1, 0), 1}}, Region::kXinvY, 8);
  for (long k = 0; k <= 7; ++k)
    CHECK(f.get(-k - 1, k) == (k % 2 == 0 ? 1 : -1));

  BiSeries p = poly2("x1", "x2", {{2, 1, Rational(3)}, {0, 0, Rational(-1)}});
  BiSeries back = iota_expand(p, {}, Region::kXinvY, 4);
  CHECK(grid_equal_on(back, p, -3, 3, -3, 3));
}

TEST_CASE("iota_expand round trips through the denominator") {
  for (auto& den : std::vector<std::vector<std::pair<LinearMap, long>>>{
           {{LinearMap(1, 0), 1}},
           {{LinearMap(1, 0), 2}},
           {{LinearMap(2, 0), 1}, {LinearMap(1, 1), 1}},
           {{LinearMap(-1, 0), 2}, {LinearMap(1, 0), 1}}}) {
    BiSeries num = poly2("x1", "x2", {{1, 1, Rational(2)}, {0, 0, Rational(1)}});
    BiSeries e = iota_expand(num, den, Region::kXinvY, 12);
    BiSeries back = grid_mul(witness_poly(den), e);
    REQUIRE(back.w1.lo <= -2);
    REQUIRE(back.w1.hi >= 2);
    CHECK(grid_equal_on(back, num, -2, 2, -4, 4));
  }
}

TEST_CASE("region tags reject cross arithmetic") {
  BiSeries a = poly2("x1", "x2", {{0, 0, Rational(1)}});
  a.region = Region::kXY;
  BiSeries b = poly2("x1", "x2", {{0, 0, Rational(1)}});
  b.region = Region::kYinvXinv;
  CHECK_THROWS_AS(grid_add(a, b), region_mismatch);
  CHECK_THROWS_AS(grid_mul(a, b), region_mismatch);
  b.region = Region::kPoly;
  CHECK(grid_add(a, b).region == Region::kXY);
}

TEST_CASE("polynomial division, gcd, and rational functions") {
  RPoly a = rpoly({-1, 0, 1});       // x^2 - 1
  RPoly b = rpoly({-1, 1});          // x - 1
  auto [q, r] = poly_divmod(a, b);
  CHECK(q == rpoly({1, 1}));
  CHECK(r.is_zero());

  RPoly p1 = rpoly({1, 2, 1});       // (x+1)^2
  RPoly p2 = rpoly({-1, 0, 1});      // (x-1)(x+1)
  CHECK(poly_gcd(p1, p2) == rpoly({1, 1}));

  auto [g, u, v] = poly_xgcd(rpoly({-1, 1}), rpoly({1, 1}));
  CHECK(g.degree() == 0);
  RPoly comb = poly_add(poly_mul(u, rpoly({-1, 1})), poly_mul(v, rpoly({1, 1})));
  CHECK(comb == g);

  RatFunc f(rpoly({0, 1}), rpoly({0, 0, 1}));  // x / x^2 = 1/x
  CHECK(f == RatFunc(rpoly({1}), rpoly({0, 1})));
  RatFunc s = f + RatFunc(1);
  CHECK(s * RatFunc(rpoly({0, 1})) == RatFunc(rpoly({1, 1})));
}

TEST_CASE("descending expansion of rational functions") {
  RatFunc f(RPoly::constant(1), rpoly({-1, 1}));  // 1/(x-1)
  WindowedSeries e = ratfunc_expand_desc(f, -6, "x");
  for (long k = 1; k <= 6; ++k) CHECK(e.get(-k) == 1);
  CHECK(e.get(0) == 0);
  // multiply back: (x-1) * expansion = 1 on the safe window
  WindowedSeries den = from_terms(kNegInf, {{1, 1}, {0, -1}});
  WindowedSeries back = window_mul(den, e);
  CHECK(series_equal_on(back, mono(0, 1), back.lo, back.hi));

  WindowedSeries z = ratfunc_expand_desc(RatFunc(0), -5, "x");
  CHECK(z.is_zero_series());
  CHECK(z.lo == kNegInf);
}

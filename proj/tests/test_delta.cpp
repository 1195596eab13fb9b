#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmi/delta.hpp"

using namespace qmi;

namespace {

WindowedSeries tail(std::mt19937_64& rng, long lo, long hi, std::string var = "x2") {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  WindowedSeries s;
  s.var = std::move(var);
  s.lo = lo;
  s.hi = hi;
  for (long e = lo; e <= hi; ++e) {
    Rational v(num(rng), den(rng));
    if (v != 0) s.c[e] = v;
  }
  return s;
}

WindowedSeries poly_coeff(std::vector<std::pair<long, Rational>> ts,
                          std::string var = "x2") {
  WindowedSeries s;
  s.var = std::move(var);
  s.lo = kNegInf;
  s.hi = 0;
  for (auto& [e, v] : ts) {
    s.hi = std::max(s.hi, e);
    if (v != 0) s.c[e] = v;
  }
  return s;
}

}  // namespace

TEST_CASE("delta stream: identity support is the unit diagonal") {
  auto t = delta_term(LinearMap(), 0, const_series(1));
  BiSeries s = coeff_stream(t, -9, 9, -9);
  for (long n = -8; n <= 8; ++n) {
    CHECK(s.get(-n - 1, n) == 1);
    CHECK(s.get(-n - 1, n + 1) == 0);
    CHECK(s.get(-n - 1, n - 1) == 0);
  }
}

TEST_CASE("delta stream: dilation weights the diagonal by powers") {
  auto t = delta_term(LinearMap(2, 0), 0, const_series(1));
  BiSeries s = coeff_stream(t, -7, 7, -7);
  for (long n = -6; n <= 6; ++n)
    CHECK(s.get(-n - 1, n) == pow_rational(Rational(2), n));
}

TEST_CASE("delta stream: first derivative carries the mode index") {
  auto t = delta_term(LinearMap(), 1, const_series(1));
  BiSeries s = coeff_stream(t, -7, 7, -7);
  for (long n = -6; n <= 6; ++n) CHECK(s.get(-n - 1, n - 1) == Rational(n));
}

TEST_CASE("residue pairing against the order-j witness") {
  for (long j = 0; j <= 3; ++j) {
    auto t = delta_term(LinearMap(), j, const_series(1));
    BiSeries s = coeff_stream(t, -9, 9, -9);
    BiSeries m = grid_mul(witness_poly({{LinearMap(), j}}), s);
    REQUIRE(m.w1.covers(-1));
    WindowedSeries row = grid_row(m, -1);
    CHECK(series_equal_on(row, const_series(1), row.lo, 6));
  }
}

TEST_CASE("poly_mul annihilation rules") {
  DeltaDistribution d;
  d.push(delta_term(LinearMap(), 0, const_series(1)));
  DeltaDistribution killed = poly_mul(d, {{LinearMap(), 1}});
  CHECK(killed.singular.empty());
  CHECK(!killed.regular);

  for (auto g : {LinearMap(1, 0), LinearMap(-1, 0), LinearMap(2, 0), LinearMap(1, 1)})
    for (long j = 0; j <= 2; ++j) {
      DeltaDistribution one;
      one.push(delta_term(g, j, poly_coeff({{0, Rational(3)}, {1, Rational(-2)}})));
      DeltaDistribution z = poly_mul(one, {{g, j + 1}});
      CHECK(z.singular.empty());
      BiSeries zs = distribution_stream(z, -8, 8, -8);
      CHECK(grid_zero_on(zs, -6, 6, -6, 6));
    }
}

TEST_CASE("poly_mul survivors below the annihilation threshold") {
  DeltaDistribution d;
  d.push(delta_term(LinearMap(2, 0), 2, poly_coeff({{0, Rational(5)}, {2, Rational(1)}})));
  DeltaDistribution m = poly_mul(d, {{LinearMap(2, 0), 2}});
  REQUIRE(m.singular.size() == 1);
  CHECK(m.singular[0].j == 0);
  BiSeries s = distribution_stream(m, -8, 8, -8);
  CHECK(s.get(-1, 0) == 20);
  CHECK(s.get(-1, 2) == 4);
}

TEST_CASE("poly_mul against a foreign support point matches direct convolution") {
  DeltaDistribution d;
  d.push(delta_term(LinearMap(), 0, const_series(1)));
  DeltaDistribution m = poly_mul(d, {{LinearMap(2, 0), 1}});
  CHECK(m.singular.size() == 1);
  BiSeries lhs = distribution_stream(m, -9, 9, -9);
  BiSeries raw = distribution_stream(d, -9, 9, -9);
  BiSeries rhs = grid_mul(witness_poly({{LinearMap(2, 0), 1}}), raw);
  CHECK(grid_equal_on(lhs, rhs, -6, 6, -6, 6));
}

TEST_CASE("flip identity") {
  auto t = delta_term(LinearMap(2, 0), 0, const_series(1));
  auto f = flip(t);
  CHECK(f.axis2);
  CHECK(f.g == LinearMap(Rational(1, 2), 0));
  BiSeries a = coeff_stream(t, -8, 8, -8);
  BiSeries b = coeff_stream(f, -8, 8, -8);
  for (long n = -6; n <= 6; ++n) {
    CHECK(a.get(-n - 1, n) == pow_rational(Rational(2), n));
    CHECK(b.get(-n - 1, n) == pow_rational(Rational(2), n));
  }
  CHECK(grid_equal_on(a, b, -6, 6, -6, 6));

  auto id0 = delta_term(LinearMap(), 0, const_series(1));
  BiSeries sym = coeff_stream(flip(id0), -8, 8, -8);
  CHECK(grid_equal_on(coeff_stream(id0, -8, 8, -8), sym, -6, 6, -6, 6));

  auto t3 = delta_term(LinearMap(3, 1), 0, const_series(1));
  auto ff = flip(flip(t3));
  CHECK(!ff.axis2);
  CHECK(ff.g == t3.g);
  BiSeries s1 = coeff_stream(t3, -8, 8, -8);
  BiSeries s2 = coeff_stream(ff, -8, 8, -8);
  CHECK(grid_equal_on(s1, s2, -8, 8, -8, 8));

  auto t1 = delta_term(LinearMap(), 1, const_series(1));
  CHECK_THROWS_AS(flip(t1), order_not_zero);
}

TEST_CASE("decompose: single support point with derivative term") {
  Rational ell(5, 3);
  auto t = delta_term(LinearMap(), 1, const_series(ell));
  BiSeries A = coeff_stream(t, -10, 10, -10);
  auto entries = decompose(A, {{LinearMap(), 2}});
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].g.is_identity());
  CHECK(entries[0].j == 1);
  CHECK(series_equal_on(entries[0].coeff, const_series(ell, entries[0].coeff.var),
                        entries[0].coeff.lo, 5));
}

TEST_CASE("decompose: zero stream gives the empty list") {
  BiSeries z;
  z.region = Region::kXinvY;
  z.w1 = {-10, 10};
  z.w2 = {-10, kPosInf};
  auto entries = decompose(z, {{LinearMap(), 2}});
  CHECK(entries.empty());
}

TEST_CASE("decompose round trip at two support points") {
  std::mt19937_64 rng(29);
  std::vector<std::pair<LinearMap, long>> p{{LinearMap(1, 0), 2}, {LinearMap(-1, 0), 2}};
  DeltaDistribution d;
  d.push(delta_term(LinearMap(1, 0), 0, tail(rng, -25, 2)));
  d.push(delta_term(LinearMap(1, 0), 1, tail(rng, -25, 1)));
  d.push(delta_term(LinearMap(-1, 0), 0, tail(rng, -25, 2)));
  d.push(delta_term(LinearMap(-1, 0), 1, tail(rng, -25, 2)));
  BiSeries A = distribution_stream(d, -12, 12, -12);
  auto entries = decompose(A, p);
  DeltaDistribution rebuilt = distribution_from_decomposition(entries);
  BiSeries B = distribution_stream(rebuilt, -12, 12, -12);
  CHECK(grid_equal_on(A, B, -4, 4, -4, 4));

  // coefficients themselves round trip: same keys, same values on the window
  for (auto& t : d.singular) {
    bool found = false;
    for (auto& e : entries)
      if (e.g == t.g && e.j == t.j) {
        found = true;
        WindowedSeries want = series_scale(t.coeff, Rational(1) / factorial(t.j));
        long lo = std::max(want.lo, e.coeff.lo);
        CHECK(series_equal_on(e.coeff, want, lo, 4));
      }
    CHECK(found);
  }
}

TEST_CASE("decompose error reporting") {
  auto t = delta_term(LinearMap(), 0, const_series(1));
  BiSeries A = coeff_stream(t, -10, 10, -10);
  CHECK_THROWS_AS(decompose(A, {{LinearMap(2, 0), 1}}), annihilation_fails);

  BiSeries shallow = coeff_stream(t, -1, 1, -5);
  CHECK_THROWS_AS(decompose(shallow, {{LinearMap(), 2}}), window_too_shallow);

  CHECK_THROWS_AS(decompose(A, {{LinearMap(), 1}, {LinearMap(), 1}}),
                  std::invalid_argument);
}

TEST_CASE("decompose handles the three-point mixed-order case") {
  std::mt19937_64 rng(31);
  std::vector<std::pair<LinearMap, long>> p{
      {LinearMap(1, 0), 1}, {LinearMap(2, 0), 2}, {LinearMap(1, 1), 1}};
  DeltaDistribution d;
  d.push(delta_term(LinearMap(1, 0), 0, tail(rng, -25, 2)));
  d.push(delta_term(LinearMap(2, 0), 0, tail(rng, -25, 1)));
  d.push(delta_term(LinearMap(2, 0), 1, tail(rng, -25, 2)));
  d.push(delta_term(LinearMap(1, 1), 0, tail(rng, -25, 1)));
  BiSeries A = distribution_stream(d, -14, 14, -14);
  auto entries = decompose(A, p);
  DeltaDistribution rebuilt = distribution_from_decomposition(entries);
  BiSeries B = distribution_stream(rebuilt, -14, 14, -14);
  CHECK(grid_equal_on(A, B, -3, 3, -3, 3));
}

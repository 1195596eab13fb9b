#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmi/fock.hpp"

using namespace qmi;

namespace {

Vec gv(const LieData& lie, long j) {
  Vec v = Vec::Zero(lie.dim());
  v(j) = 1;
  return v;
}

// Independent dimension oracle: multisets of parts, where a part of size k
// comes in colors(k) flavors. Counts coefficients of Π_k (1-x^k)^{-colors(k)}.
std::vector<long> colored_partition_counts(long D, const std::function<long(long)>& colors) {
  std::vector<long> dp(D + 1, 0);
  dp[0] = 1;
  for (long k = 1; k <= D; ++k)
    for (long rep = 0; rep < colors(k); ++rep)
      for (long d = k; d <= D; ++d) dp[d] += dp[d - k];
  return dp;
}

std::vector<long> fock_dims(const FockSpace& f) {
  std::vector<long> out;
  for (long d = 0; d <= f.D; ++d) out.push_back(f.mod.dim_at(d));
  return out;
}

}  // namespace

TEST_CASE("algebra validation") {
  CHECK(validate_algebra(lie_abelian(1)).empty());
  CHECK(validate_algebra(lie_abelian(3)).empty());
  CHECK(validate_algebra(lie_sl2()).empty());
  CHECK(validate_algebra(lie_opposite(lie_sl2())).empty());

  LieData bad = lie_sl2();
  bad.gram = Mat::Identity(3, 3);
  auto issues = validate_algebra(bad);
  REQUIRE(!issues.empty());
  CHECK(issues.front().find("invariance") != std::string::npos);
  CHECK(issues.front().find("e") != std::string::npos);

  LieData asym = lie_abelian(2);
  asym.ad[0](0, 1) = 1;  // [a1,a2] = a1 without the matching -[a2,a1]
  auto issues2 = validate_algebra(asym);
  REQUIRE(!issues2.empty());
  CHECK(issues2.front().find("antisymmetry") != std::string::npos);
}

TEST_CASE("gamma validation") {
  LieData ab = lie_abelian(1);
  CHECK(validate_gamma(gamma_trivial(1), ab).empty());

  GammaData z2 = gamma_zmod2_negation(1);
  CHECK(validate_gamma(z2, ab).empty());
  CHECK(phi_of(z2.elements[1]) == Rational(-1));

  GammaData stretch = z2;
  stretch.elements[1].action = Mat::Identity(1, 1) * Rational(2);
  auto issues = validate_gamma(stretch, ab);
  REQUIRE(!issues.empty());
  bool mentions_form = false;
  for (const auto& s : issues) mentions_form |= s.find("form") != std::string::npos;
  CHECK(mentions_form);

  GammaData sl2gamma = gamma_zmod2_negation(3);
  // negation is not an automorphism of sl2: [-e,-f] = h ≠ -h
  auto issues2 = validate_gamma(sl2gamma, lie_sl2());
  REQUIRE(!issues2.empty());
  CHECK(issues2.front().find("automorphism") != std::string::npos);
}

TEST_CASE("symbolic mode brackets") {
  LieData sl2 = lie_sl2();
  GammaData triv = gamma_trivial(3);
  Rational ell(3);

  // [e_m, f_n] = h_{m+n} + m δ_{m+n,0} ⟨e,f⟩ ℓ
  ModeCombo c = mode_bracket_symbolic(gv(sl2, 0), 2, gv(sl2, 1), -2, sl2, triv, ell);
  REQUIRE(c.terms.size() == 1);
  CHECK(is_zero_vec(c.terms.at(0) - gv(sl2, 2)));
  CHECK(c.central == Rational(6));

  ModeCombo c2 = mode_bracket_symbolic(gv(sl2, 0), 2, gv(sl2, 1), -1, sl2, triv, ell);
  CHECK(c2.central == 0);
  CHECK(is_zero_vec(c2.terms.at(1) - gv(sl2, 2)));

  // twisted abelian: [a_m, a_n] = ℓ m (1 - (-1)^m) δ_{m+n,0}
  LieData ab = lie_abelian(1);
  GammaData z2 = gamma_zmod2_negation(1);
  for (long m = -3; m <= 3; ++m) {
    ModeCombo t = mode_bracket_symbolic(gv(ab, 0), m, gv(ab, 0), -m, ab, z2, Rational(1));
    CHECK(t.terms.empty());
    Rational expect = Rational(m) * (1 - ((m % 2 == 0) ? 1 : -1));
    CHECK(t.central == expect);
  }

  GammaData shifted = gamma_trivial(1);
  shifted.elements[0].psi = LinearMap{1, 1};
  CHECK_THROWS_AS(mode_bracket_symbolic(gv(ab, 0), 1, gv(ab, 0), -1, ab, shifted, Rational(1)),
                  nonzero_translation);
}

TEST_CASE("vacuum Fock dimensions and actions") {
  LieData ab = lie_abelian(1);
  FockSpace f = build_vacuum_fock(ab, Rational(1), 6);
  auto oracle = colored_partition_counts(6, [](long) { return 1; });
  CHECK(fock_dims(f) == oracle);
  CHECK(fock_dims(f) == std::vector<long>{1, 1, 2, 3, 5, 7, 11});

  // a(1)a(-1)1 = ℓ⟨a,a⟩·1
  long vac = 0;
  Vec am1 = act_gen(f, 0, -1, vac);
  REQUIRE(!is_zero_vec(am1));
  Vec back = act_gen_vec(f, gv(ab, 0), 1, am1);
  CHECK(is_zero_vec(back - basis_vec(f.mod, vac)));

  // a(n)1 = 0 for n ≥ 0
  for (long n = 0; n <= 3; ++n) CHECK(is_zero_vec(act_gen(f, 0, n, vac)));

  LieData sl2 = lie_sl2();
  FockSpace fs = build_vacuum_fock(sl2, Rational(1), 4);
  auto oracle3 = colored_partition_counts(4, [](long) { return 3; });
  CHECK(fock_dims(fs) == oracle3);
  CHECK(fock_dims(fs) == std::vector<long>{1, 3, 9, 22, 51});

  // f(-1)e(-1)1 = e(-1)f(-1)1 - h(-2)1
  Vec em1 = act_gen(fs, 0, -1, 0);
  Vec lhs = act_gen_vec(fs, gv(sl2, 1), -1, em1);
  Monomial ef = {{1, 0}, {1, 1}};
  Monomial h2 = {{2, 2}};
  Vec rhs = basis_vec(fs.mod, fs.index.at(ef)) - basis_vec(fs.mod, fs.index.at(h2));
  CHECK(is_zero_vec(lhs - rhs));

  // e(1)f(-1)1 = h(0)1 + ⟨e,f⟩ℓ·1 = 1
  Vec fm1 = act_gen(fs, 1, -1, 0);
  Vec top = act_gen_vec(fs, gv(sl2, 0), 1, fm1);
  CHECK(is_zero_vec(top - basis_vec(fs.mod, 0)));

  CHECK_THROWS_AS(act_gen(fs, 0, -5, 0), watermark_exceeded);
}

TEST_CASE("twisted Fock at infinity") {
  LieData ab = lie_abelian(1);
  GammaData z2 = gamma_zmod2_negation(1);
  Rational ell(1);
  FockSpace f = build_infinity_fock(ab, z2, ell, 6);
  auto oracle = colored_partition_counts(6, [](long k) { return (k % 2 == 1) ? 1L : 0L; });
  CHECK(fock_dims(f) == oracle);
  CHECK(fock_dims(f) == std::vector<long>{1, 1, 1, 2, 2, 3, 4});

  // even modes act as zero (quotient kills a ⊗ t^{2k})
  for (long idx = 0; idx < f.mod.dim(); ++idx) {
    long deg = f.mod.degree_of(idx);
    for (long n = -6; n <= 6; n += 2) {
      if (n >= 1 && deg + n > f.D) continue;
      CHECK(is_zero_vec(act_gen(f, 0, n, idx)));
    }
  }

  // a(-1)a(1)v0 = [a(-1),a(1)]v0; twisted bracket gives -2ℓ⟨a,a⟩ v0
  Vec up = act_gen(f, 0, 1, 0);
  REQUIRE(!is_zero_vec(up));
  Vec down = act_gen_vec(f, gv(ab, 0), -1, up);
  CHECK(is_zero_vec(down + Rational(2) * basis_vec(f.mod, 0)));

  // untwisted comparison point: a(-1)a(1)v0 = -ℓ v0
  FockSpace ft = build_infinity_fock(ab, gamma_trivial(1), Rational(5), 4);
  Vec upt = act_gen(ft, 0, 1, 0);
  Vec downt = act_gen_vec(ft, gv(ab, 0), -1, upt);
  CHECK(is_zero_vec(downt + Rational(5) * basis_vec(ft.mod, 0)));
  for (long n = 0; n >= -3; --n) CHECK(is_zero_vec(act_gen(ft, 0, n, 0)));

  // odd-mode brackets [a_m, a_{-m}] = 2ℓm⟨a,a⟩ on every in-range basis vector
  for (long m : {1L, 3L}) {
    for (long idx = 0; idx < f.mod.dim(); ++idx) {
      if (f.mod.degree_of(idx) + m > f.D) continue;
      Vec w = basis_vec(f.mod, idx);
      Vec br = mode_bracket_apply(f, gv(ab, 0), m, gv(ab, 0), -m, w);
      CHECK(is_zero_vec(br - Rational(2 * m) * w));
    }
  }
  for (long idx = 0; idx < f.mod.dim(); ++idx) {
    if (f.mod.degree_of(idx) + 2 > f.D) continue;
    Vec w = basis_vec(f.mod, idx);
    CHECK(is_zero_vec(mode_bracket_apply(f, gv(ab, 0), 2, gv(ab, 0), -2, w)));
  }
}

TEST_CASE("bracket apply matches symbolic expansion") {
  LieData ab = lie_abelian(1);
  LieData sl2 = lie_sl2();
  std::vector<FockSpace> spaces;
  spaces.push_back(build_infinity_fock(ab, gamma_zmod2_negation(1), Rational(2), 5));
  spaces.push_back(build_vacuum_fock(sl2, Rational(1), 3));
  for (auto& f : spaces) {
    for (long j1 = 0; j1 < f.lie.dim(); ++j1)
      for (long j2 = 0; j2 < f.lie.dim(); ++j2)
        for (long m = -2; m <= 2; ++m)
          for (long n = -2; n <= 2; ++n) {
            ModeCombo cb =
                mode_bracket_symbolic(gv(f.lie, j1), m, gv(f.lie, j2), n, f.lie, f.gamma,
                                      f.level);
            for (long idx = 0; idx < f.mod.dim(); ++idx) {
              long deg = f.mod.degree_of(idx);
              if (deg > 5) continue;
              long s1 = f.sign * m, s2 = f.sign * n;
              if (deg + s1 + s2 > f.D || deg + s1 + s2 < 0) continue;
              Vec w = basis_vec(f.mod, idx);
              Vec direct = mode_bracket_apply(f, gv(f.lie, j1), m, gv(f.lie, j2), n, w);
              Vec via = cb.central * w;
              for (const auto& [tm, tv] : cb.terms) via += act_gen_vec(f, tv, tm, w);
              CHECK(is_zero_vec(direct - via));
            }
          }
  }
  // zero vector in, zero vector out
  Vec z = Vec::Zero(spaces[0].mod.dim());
  CHECK(is_zero_vec(
      mode_bracket_apply(spaces[0], gv(ab, 0), 1, gv(ab, 0), -1, z)));
}

TEST_CASE("bracket apply with translation parts") {
  // Γ = ℤ/2 with Ψ(σ) = -x + 1 (an involution of G) on the free module at
  // infinity: the central term follows the general extraction
  // ℓ⟨γa,b⟩(-n)C(m,m+n)s^{-n}d^{m+n}.
  LieData ab = lie_abelian(1);
  FockSpace f = build_infinity_fock(ab, gamma_trivial(1), Rational(1), 4);
  GammaData tw;
  tw.elements.push_back({Mat::Identity(1, 1), LinearMap{1, 0}});
  tw.elements.push_back({-Mat::Identity(1, 1), LinearMap{-1, 1}});
  tw.mul = {{0, 1}, {1, 0}};
  CHECK(validate_gamma(tw, ab).empty());
  f.gamma = tw;

  for (long idx = 0; idx < f.mod.dim(); ++idx) {
    long deg = f.mod.degree_of(idx);
    if (deg + 1 > f.D) continue;
    Vec w = basis_vec(f.mod, idx);
    // [a_2, a_{-1}]w: identity element contributes nothing (abelian, m+n≠0);
    // σ contributes the central ℓ⟨σa,a⟩(1)C(2,1)s(-1)... = 2ℓ⟨a,a⟩... with
    // ⟨σa,a⟩ = -1, s = -1, d = 1: (-1)·1·2·(-1)·1 = 2.
    Vec br = mode_bracket_apply(f, gv(ab, 0), 2, gv(ab, 0), -1, w);
    CHECK(is_zero_vec(br - Rational(2) * w));
  }

  // truncation honesty: modes below -deg annihilate, so the i-sum stops
  LieData sl2 = lie_sl2();
  GammaData chev;
  Mat swap = Mat::Zero(3, 3);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  swap(2, 2) = -1;
  chev.elements.push_back({Mat::Identity(3, 3), LinearMap{1, 0}});
  chev.elements.push_back({swap, LinearMap{-1, 1}});
  chev.mul = {{0, 1}, {1, 0}};
  CHECK(validate_gamma(chev, sl2).empty());
  FockSpace fs = build_infinity_fock(sl2, gamma_trivial(3), Rational(1), 3);
  fs.gamma = chev;
  Vec w = basis_vec(fs.mod, fs.mod.offsets[2]);  // a degree-2 vector
  Vec br = mode_bracket_apply(fs, gv(sl2, 0), 1, gv(sl2, 0), 0, w);
  CHECK(br.size() == fs.mod.dim());
  // terms beyond the truncation index are genuinely zero: [σe,e] = [f,e] = -h
  Vec cvec = fs.lie.bracket(swap * gv(sl2, 0), gv(sl2, 0));
  REQUIRE(!is_zero_vec(cvec));
  for (long mode = -3; mode >= -6; --mode)
    CHECK(is_zero_vec(act_gen_vec(fs, cvec, mode, w)));
  CHECK_THROWS_AS(build_infinity_fock(sl2, chev, Rational(1), 3), nonzero_translation);
}

TEST_CASE("quotient relation as stream identity") {
  // (γa)_W(x) = φ(γ)^{-1} a_W(γ⁻¹-substituted stream)
  LieData ab = lie_abelian(1);
  GammaData z2 = gamma_zmod2_negation(1);
  FockSpace f = build_infinity_fock(ab, z2, Rational(1), 5);
  OperatorField a = generator_field(f, 0);
  OperatorField ga = vector_field(f, z2.elements[1].action * gv(ab, 0));
  OperatorField turned =
      field_scale(l_action(z2.elements[1].psi, a), Rational(1) / phi_of(z2.elements[1]));
  CHECK(field_equal(ga, turned));

  // apply_series on the vacuum: only negative exponents appear
  VecSeries s = apply_series(a, basis_vec(f.mod, 0), stream_floor(f.mod, 0, 0));
  CHECK(s.hi <= -1);
  for (const auto& [e, v] : s.c) CHECK(e <= -1);
  Monomial a1 = {{1, 0}};
  CHECK(is_zero_vec(s.get(-2) - basis_vec(f.mod, f.index.at(a1))));

  // identity field: constant stream
  OperatorField one = identity_field(f.mod);
  for (long idx = 0; idx < f.mod.dim(); ++idx) {
    VecSeries si = apply_series(one, basis_vec(f.mod, idx), -3);
    CHECK(is_zero_vec(si.get(0) - basis_vec(f.mod, idx)));
    CHECK(series_zero_on(si, -3, -1));
  }
}

TEST_CASE("jacobi check") {
  LieData ab = lie_abelian(1);
  FockSpace f1 = build_infinity_fock(ab, gamma_zmod2_negation(1), Rational(1), 5);
  CHECK(jacobi_check(f1, 5).empty());

  LieData sl2 = lie_sl2();
  FockSpace f2 = build_vacuum_fock(sl2, Rational(1), 3);
  CHECK(jacobi_check(f2, 3).empty());

  FockSpace f3 = build_infinity_fock(sl2, gamma_trivial(3), Rational(-1), 3);
  CHECK(jacobi_check(f3, 3).empty());
}

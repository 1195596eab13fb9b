#pragma once

#include "qmi/exact_linalg.hpp"
#include "qmi/linear_map.hpp"

#include <map>
#include <string>
#include <vector>

namespace qmi {

struct nonzero_translation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite-dimensional Lie algebra with invariant form.  Structure constants
/// are held as ad-matrices: ad[i].col(j) = [e_i, e_j].
struct LieData {
  std::vector<std::string> labels;
  std::vector<Mat> ad;
  Mat gram;

  long dim() const { return long(labels.size()); }

  Vec bracket(const Vec& u, const Vec& v) const {
    Vec out = Vec::Zero(dim());
    for (long i = 0; i < dim(); ++i)
      if (u(i) != 0) out += u(i) * (ad[i] * v);
    return out;
  }

  Rational form(const Vec& u, const Vec& v) const {
    return (u.transpose() * gram * v)(0, 0);
  }
};

/// Finite automorphism group Γ with Ψ: Γ → G.  elements[0] is the identity.
struct GammaElement {
  Mat action;
  LinearMap psi;
};

struct GammaData {
  std::vector<GammaElement> elements;
  std::vector<std::vector<long>> mul;  // mul[i][j]: index of gᵢgⱼ

  long order() const { return long(elements.size()); }
  bool pure_scalings() const {
    for (const auto& e : elements)
      if (e.psi.beta != 0) return false;
    return true;
  }
};

inline Rational phi_of(const GammaElement& g) { return phi(g.psi); }

// ---- validation ----------------------------------------------------------

inline std::vector<std::string> validate_algebra(const LieData& d) {
  std::vector<std::string> issues;
  long n = d.dim();
  if (long(d.ad.size()) != n || d.gram.rows() != n || d.gram.cols() != n) {
    issues.push_back("structure data dimensions do not match basis size");
    return issues;
  }
  auto lbl = [&](long i) { return d.labels[i]; };
  for (long i = 0; i < n && issues.empty(); ++i)
    for (long j = 0; j <= i && issues.empty(); ++j) {
      Vec s = d.ad[i].col(j) + d.ad[j].col(i);
      if (!is_zero_vec(s))
        issues.push_back("antisymmetry violated at (" + lbl(i) + ", " + lbl(j) + ")");
    }
  for (long i = 0; i < n && issues.empty(); ++i)
    for (long j = 0; j < n && issues.empty(); ++j)
      for (long k = 0; k < n && issues.empty(); ++k) {
        Vec ei = Vec::Zero(n), ej = Vec::Zero(n), ek = Vec::Zero(n);
        ei(i) = 1;
        ej(j) = 1;
        ek(k) = 1;
        Vec cyc = d.bracket(d.bracket(ei, ej), ek) + d.bracket(d.bracket(ej, ek), ei) +
                  d.bracket(d.bracket(ek, ei), ej);
        if (!is_zero_vec(cyc))
          issues.push_back("Jacobi identity violated at (" + lbl(i) + ", " + lbl(j) + ", " +
                           lbl(k) + ")");
      }
  if (issues.empty() && !mat_equal(d.gram, d.gram.transpose()))
    issues.push_back("bilinear form is not symmetric");
  if (issues.empty() && mat_rank(d.gram) != n)
    issues.push_back("bilinear form is degenerate");
  for (long i = 0; i < n && issues.empty(); ++i)
    for (long j = 0; j < n && issues.empty(); ++j)
      for (long k = 0; k < n && issues.empty(); ++k) {
        Vec ei = Vec::Zero(n), ej = Vec::Zero(n), ek = Vec::Zero(n);
        ei(i) = 1;
        ej(j) = 1;
        ek(k) = 1;
        Rational lhs = d.form(d.bracket(ei, ej), ek);
        Rational rhs = d.form(ei, d.bracket(ej, ek));
        if (lhs != rhs)
          issues.push_back("form invariance violated at (" + lbl(i) + ", " + lbl(j) + ", " +
                           lbl(k) + ")");
      }
  return issues;
}

inline std::vector<std::string> validate_gamma(const GammaData& g, const LieData& lie) {
  std::vector<std::string> issues;
  long n = lie.dim();
  long ord = g.order();
  if (ord == 0) {
    issues.push_back("empty group");
    return issues;
  }
  if (!mat_equal(g.elements[0].action, Mat::Identity(n, n)) ||
      g.elements[0].psi.alpha != 1 || g.elements[0].psi.beta != 0)
    issues.push_back("element 0 is not the identity");
  for (long t = 0; t < ord && issues.empty(); ++t) {
    const Mat& A = g.elements[t].action;
    for (long i = 0; i < n && issues.empty(); ++i)
      for (long j = 0; j < n && issues.empty(); ++j) {
        Vec ei = Vec::Zero(n), ej = Vec::Zero(n);
        ei(i) = 1;
        ej(j) = 1;
        if (!is_zero_vec(A * lie.bracket(ei, ej) - lie.bracket(A * ei, A * ej)))
          issues.push_back("element " + std::to_string(t) + " is not a Lie automorphism at (" +
                           lie.labels[i] + ", " + lie.labels[j] + ")");
        else if (lie.form(A * ei, A * ej) != lie.form(ei, ej))
          issues.push_back("element " + std::to_string(t) + " does not preserve the form at (" +
                           lie.labels[i] + ", " + lie.labels[j] + ")");
      }
    if (issues.empty() && phi_of(g.elements[t]) == 0)
      issues.push_back("psi of element " + std::to_string(t) + " is singular");
  }
  if (long(g.mul.size()) != ord)
    issues.push_back("multiplication table size mismatch");
  for (long i = 0; i < ord && issues.empty(); ++i) {
    if (long(g.mul[i].size()) != ord) {
      issues.push_back("multiplication table size mismatch");
      break;
    }
    for (long j = 0; j < ord && issues.empty(); ++j) {
      long k = g.mul[i][j];
      if (k < 0 || k >= ord) {
        issues.push_back("multiplication table entry out of range");
        break;
      }
      Mat prod = g.elements[i].action * g.elements[j].action;
      if (!mat_equal(prod, g.elements[k].action))
        issues.push_back("action is not a group representation at (" + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
      LinearMap pc = compose(g.elements[i].psi, g.elements[j].psi);
      if (pc.alpha != g.elements[k].psi.alpha || pc.beta != g.elements[k].psi.beta)
        issues.push_back("psi is not a group homomorphism at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
    }
  }
  return issues;
}

// ---- builtins -------------------------------------------------------------

inline LieData lie_abelian(long rank) {
  LieData d;
  for (long i = 0; i < rank; ++i)
    d.labels.push_back(rank == 1 ? "a" : "a" + std::to_string(i + 1));
  d.ad.assign(rank, Mat::Zero(rank, rank));
  d.gram = Mat::Identity(rank, rank);
  return d;
}

/// Basis (e, f, h): [e,f] = h, [h,e] = 2e, [h,f] = −2f; ⟨e,f⟩ = 1, ⟨h,h⟩ = 2.
inline LieData lie_sl2() {
  LieData d;
  d.labels = {"e", "f", "h"};
  Mat ade = Mat::Zero(3, 3), adf = Mat::Zero(3, 3), adh = Mat::Zero(3, 3);
  ade(2, 1) = 1;    // [e,f] = h
  ade(0, 2) = -2;   // [e,h] = -2e
  adf(2, 0) = -1;   // [f,e] = -h
  adf(1, 2) = 2;    // [f,h] = 2f
  adh(0, 0) = 2;    // [h,e] = 2e
  adh(1, 1) = -2;   // [h,f] = -2f
  d.ad = {ade, adf, adh};
  d.gram = Mat::Zero(3, 3);
  d.gram(0, 1) = 1;
  d.gram(1, 0) = 1;
  d.gram(2, 2) = 2;
  return d;
}

inline LieData lie_opposite(LieData d) {
  for (auto& m : d.ad) m = -m;
  return d;
}

inline GammaData gamma_trivial(long dim) {
  GammaData g;
  g.elements.push_back({Mat::Identity(dim, dim), LinearMap{1, 0}});
  g.mul = {{0}};
  return g;
}

/// ℤ/2 acting by −1 on g, Ψ(σ)(x) = −x.
inline GammaData gamma_zmod2_negation(long dim) {
  GammaData g;
  g.elements.push_back({Mat::Identity(dim, dim), LinearMap{1, 0}});
  g.elements.push_back({-Mat::Identity(dim, dim), LinearMap{-1, 0}});
  g.mul = {{0, 1}, {1, 0}};
  return g;
}

// ---- symbolic mode bracket -------------------------------------------------

/// Finite combination of modes plus a central scalar.
struct ModeCombo {
  std::map<long, Vec> terms;  // mode index → coefficient vector in g
  Rational central = 0;

  void add_term(long mode, const Vec& v) {
    if (is_zero_vec(v)) return;
    auto [it, fresh] = terms.emplace(mode, v);
    if (!fresh) {
      it->second += v;
      if (is_zero_vec(it->second)) terms.erase(it);
    }
  }
};

/// [a_m, b_n] = Σ_γ γ_s^m [γa,b]_{m+n} + ℓ⟨γa,b⟩ m γ_s^m δ_{m+n,0},
/// γ_s the scaling of Ψ(γ)⁻¹.  Requires every Ψ(γ) to be a pure scaling.
inline ModeCombo mode_bracket_symbolic(const Vec& a, long m, const Vec& b, long n,
                                       const LieData& lie, const GammaData& gamma,
                                       const Rational& level) {
  if (!gamma.pure_scalings())
    throw nonzero_translation("mode_bracket_symbolic: some psi has a translation part");
  ModeCombo out;
  for (const auto& g : gamma.elements) {
    Rational gs = invert(g.psi).alpha;
    Rational w = pow_rational(gs, m);
    Vec ga = g.action * a;
    out.add_term(m + n, w * lie.bracket(ga, b));
    if (m + n == 0) out.central += level * lie.form(ga, b) * Rational(m) * w;
  }
  return out;
}

}  // namespace qmi

#pragma once

#include "qmi/graded_module.hpp"
#include "qmi/linear_map.hpp"

#include <functional>

namespace qmi {

/// Field a(x) ∈ E°(W): for each basis vector w the stream a(x)w ∈ W((x⁻¹)),
/// stored as a windowed series in x with mode aₙ at exponent −n−1.
/// Mode n shifts degree by n + c.  On the truncated module the stream of a
/// degree-d basis vector is exactly zero above exponent d + c − 1 and unknown
/// below d + c − D − 1 (outputs would leave the watermark).  graded records
/// whether the shift law actually holds; substitutions with a translation
/// part mix degrees and clear it, leaving c as bookkeeping only.
struct OperatorField {
  const GradedModule* mod = nullptr;
  long c = 0;
  bool graded = true;
  std::vector<VecSeries> streams;
};

inline long stream_floor(const GradedModule& m, long deg, long c) {
  return deg + c - m.D - 1;
}
inline long stream_top(long deg, long c) { return deg + c - 1; }

inline OperatorField field_zero(const GradedModule& m, long c) {
  OperatorField f;
  f.mod = &m;
  f.c = c;
  f.streams.reserve(m.dim());
  for (long i = 0; i < m.dim(); ++i) {
    long d = m.degree_of(i);
    f.streams.push_back(series_zero<Vec>("x", stream_floor(m, d, c), stream_top(d, c)));
  }
  return f;
}

/// fn(n, i) = mode n applied to basis vector i.
inline OperatorField field_from_modes(const GradedModule& m, long c,
                                      const std::function<Vec(long, long)>& fn) {
  OperatorField f = field_zero(m, c);
  for (long i = 0; i < m.dim(); ++i) {
    auto& s = f.streams[i];
    for (long e = s.lo; e <= s.hi; ++e) {
      Vec v = fn(-e - 1, i);
      if (!is_zero(v)) s.add_at(e, std::move(v));
    }
  }
  return f;
}

inline OperatorField identity_field(const GradedModule& m) {
  OperatorField f;
  f.mod = &m;
  f.c = 1;
  f.streams.reserve(m.dim());
  for (long i = 0; i < m.dim(); ++i) {
    VecSeries s = series_zero<Vec>("x", kNegInf, 0);
    s.add_at(0, basis_vec(m, i));
    f.streams.push_back(std::move(s));
  }
  return f;
}

inline VecSeries apply_series(const OperatorField& a, const Vec& w, long floor) {
  VecSeries r = series_zero<Vec>("x", kNegInf, kNegInf);
  for (long i = 0; i < long(w.size()); ++i) {
    if (w(i) == 0) continue;
    r = series_add(r, series_scale(a.streams[i], w(i)));
  }
  if (r.lo > floor)
    throw watermark_exceeded("apply_series: requested floor " + std::to_string(floor) +
                             " below knowledge floor " + std::to_string(r.lo));
  return series_truncate(std::move(r), floor);
}

inline bool mode_known(const OperatorField& a, long n, long i) {
  return a.streams[i].known_at(-n - 1);
}

inline Vec mode_apply(const OperatorField& a, long n, const Vec& w) {
  Vec out = Vec::Zero(a.mod->dim());
  for (long i = 0; i < long(w.size()); ++i) {
    if (w(i) == 0) continue;
    if (!mode_known(a, n, i))
      throw watermark_exceeded("mode_apply: mode " + std::to_string(n) +
                               " unknown on basis vector " + std::to_string(i));
    auto it = a.streams[i].c.find(-n - 1);
    if (it != a.streams[i].c.end()) out += it->second * w(i);
  }
  return out;
}

/// L_g a = a(g⁻¹(x)), stream-wise substitution.
inline OperatorField l_action(const LinearMap& g, const OperatorField& a) {
  OperatorField r;
  r.mod = a.mod;
  r.c = a.c;
  r.graded = a.graded && g.beta == 0;
  r.streams.reserve(a.streams.size());
  LinearMap gi = invert(g);
  for (const auto& s : a.streams) r.streams.push_back(substitute_linear(s, gi));
  return r;
}

inline OperatorField field_add(const OperatorField& a, const OperatorField& b) {
  if (a.mod != b.mod) throw std::invalid_argument("field_add: different modules");
  OperatorField r;
  r.mod = a.mod;
  r.c = a.c;
  r.graded = a.graded && b.graded && a.c == b.c;
  r.streams.reserve(a.streams.size());
  for (size_t i = 0; i < a.streams.size(); ++i)
    r.streams.push_back(series_add(a.streams[i], b.streams[i]));
  return r;
}

inline OperatorField field_scale(OperatorField a, const Rational& s) {
  for (auto& st : a.streams) st = series_scale(std::move(st), s);
  return a;
}

inline OperatorField field_sub(const OperatorField& a, const OperatorField& b) {
  return field_add(a, field_scale(b, Rational(-1)));
}

/// Stream equality on the joint knowledge window of every basis vector.
inline bool field_equal(const OperatorField& a, const OperatorField& b) {
  if (a.mod != b.mod) return false;
  for (size_t i = 0; i < a.streams.size(); ++i) {
    const auto& sa = a.streams[i];
    const auto& sb = b.streams[i];
    long lo = std::max(sa.lo, sb.lo);
    long hi = std::max(sa.hi, sb.hi);
    if (hi < lo) continue;
    if (!series_equal_on(sa, sb, lo, hi)) return false;
  }
  return true;
}

inline bool field_is_zero(const OperatorField& a) {
  for (const auto& s : a.streams)
    if (!series_zero_on(s, s.lo, s.hi)) return false;
  return true;
}

}  // namespace qmi

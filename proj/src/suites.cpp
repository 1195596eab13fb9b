#include "qmi/suites.hpp"

#include "qmi/delta.hpp"
#include "qmi/module_infinity.hpp"

#include <optional>
#include <random>
#include <set>

namespace qmi {

namespace {

OperatorField product_or_zero(const std::map<long, OperatorField>& m, long n,
                              const GradedModule& mod, long cab) {
  auto it = m.find(n);
  if (it != m.end()) return it->second;
  return field_zero(mod, cab + n);
}

struct SuiteCtx {
  const RunConfig& cfg;
  std::optional<VacuumVA> V;
  std::optional<ModuleAtInfinity> M;
  std::string build_issue;
  bool built = false;

  explicit SuiteCtx(const RunConfig& c) : cfg(c) {}

  bool ensure_built() {
    if (!built) {
      built = true;
      try {
        V.emplace(build_vacuum(lie_opposite(cfg.lie), -cfg.level, cfg.cutoff));
        M.emplace(build_induced_infinity(cfg.lie, cfg.gamma, cfg.level, cfg.cutoff));
        extend_ymap(*M, *V);
      } catch (const std::exception& ex) {
        M.reset();
        V.reset();
        build_issue = ex.what();
      }
    }
    return M.has_value();
  }
};

CheckEntry construction_failure(const std::string& why) {
  CheckEntry e;
  e.id = "construction";
  e.anchor = "induced module construction from validated structure data";
  e.pass = false;
  e.where = why;
  return e;
}

void prefix_ids(std::vector<CheckEntry>& es, const std::string& suite) {
  for (auto& e : es) e.id = suite + "/" + e.id;
}

// ---- delta ------------------------------------------------------------

std::vector<std::pair<LinearMap, std::string>> delta_supports() {
  return {{LinearMap(1, 0), "x"},
          {LinearMap(-1, 0), "-x"},
          {LinearMap(2, 0), "2x"},
          {LinearMap(1, 1), "x+1"}};
}

WindowedSeries random_tail(std::mt19937_64& rng, long lo, long hi) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  WindowedSeries s;
  s.var = "x2";
  s.lo = lo;
  s.hi = hi;
  for (long e = lo; e <= hi; ++e) {
    Rational v(num(rng), den(rng));
    if (v != 0) s.c[e] = v;
  }
  return s;
}

std::vector<CheckEntry> suite_delta(SuiteCtx& ctx) {
  const long wlo = ctx.cfg.win_lo, whi = ctx.cfg.win_hi;
  const long ilo = wlo + 8, ihi = whi - 8;
  std::vector<CheckEntry> out;
  std::mt19937_64 rng(1284916);
  auto supports = delta_supports();

  for (const auto& [g, gname] : supports)
    for (long j = 0; j <= 2; ++j) {
      CheckEntry e;
      e.id = "annihilation(" + gname + ", order " + std::to_string(j) + ")";
      e.anchor = "support factor to the order annihilates a delta term";
      DeltaDistribution d;
      d.push(delta_term(g, j, random_tail(rng, wlo - 15, 2)));
      DeltaDistribution z = poly_mul(d, {{g, j + 1}});
      if (!z.singular.empty()) {
        e.pass = false;
        e.where = "a singular term survived";
      } else if (ilo <= ihi) {
        BiSeries zs = distribution_stream(z, wlo, whi, wlo);
        if (!grid_zero_on(zs, ilo, ihi, ilo, ihi)) {
          e.pass = false;
          e.where = "residual stream is not zero on the window";
        }
      } else {
        e.pass = false;
        e.where = "window produced no comparable cells";
      }
      out.push_back(std::move(e));
    }

  for (const auto& [g, gname] : supports) {
    CheckEntry e;
    e.id = "flip(" + gname + ")";
    e.anchor = "substitution axis exchange fixes an order-zero delta term";
    auto t = delta_term(g, 0, const_series(Rational(3, 2)));
    BiSeries a = coeff_stream(t, wlo, whi, wlo);
    BiSeries b = coeff_stream(flip(t), wlo, whi, wlo);
    if (ilo > ihi || !grid_equal_on(a, b, ilo, ihi, ilo, ihi)) {
      e.pass = false;
      e.where = ilo > ihi ? "window produced no comparable cells"
                          : "flipped stream disagrees on the window";
    }
    out.push_back(std::move(e));
  }
  {
    CheckEntry e;
    e.id = "flip-order-guard";
    e.anchor = "axis exchange is defined for order zero only";
    try {
      flip(delta_term(LinearMap(), 1, const_series(1)));
      e.pass = false;
      e.where = "no rejection for a derivative term";
    } catch (const order_not_zero&) {
    }
    out.push_back(std::move(e));
  }

  for (long j = 0; j <= 2; ++j) {
    CheckEntry e;
    e.id = "residue-pairing(order " + std::to_string(j) + ")";
    e.anchor = "pairing against the order-j witness recovers the coefficient";
    try {
      auto t = delta_term(LinearMap(), j, const_series(1));
      BiSeries s = coeff_stream(t, wlo, whi, wlo);
      BiSeries m = grid_mul(witness_poly({{LinearMap(), j}}), s);
      WindowedSeries row = grid_row(m, -1);
      if (!series_equal_on(row, const_series(1), row.lo, ihi - 2)) {
        e.pass = false;
        e.where = "residue row disagrees with the coefficient";
      }
    } catch (const std::exception& ex) {
      e.pass = false;
      e.where = ex.what();
    }
    out.push_back(std::move(e));
  }

  const std::vector<std::pair<int, int>> picks{{0, 1}, {0, 2}, {2, 3}, {1, 3}};
  for (size_t rep = 0; rep < picks.size(); ++rep) {
    CheckEntry e;
    e.id = "decompose-roundtrip(sample " + std::to_string(rep) + ")";
    e.anchor = "decomposition against the witness rebuilds the distribution";
    std::vector<std::pair<LinearMap, long>> p;
    DeltaDistribution d;
    for (int pick : {picks[rep].first, picks[rep].second}) {
      const auto& [g, gname] = supports[pick];
      long k = 1 + (long(rep) + pick) % 2;
      p.emplace_back(g, k + 1);
      for (long j = 0; j <= k; ++j)
        d.push(delta_term(g, j, random_tail(rng, wlo - 15, 2)));
    }
    try {
      BiSeries A = distribution_stream(d, wlo, whi, wlo);
      auto entries = decompose(A, p);
      DeltaDistribution rebuilt = distribution_from_decomposition(entries);
      BiSeries B = distribution_stream(rebuilt, wlo, whi, wlo);
      if (ilo > ihi) {
        e.pass = false;
        e.where = "window produced no comparable cells";
      } else if (!grid_equal_on(A, B, ilo, ihi, ilo, ihi)) {
        e.pass = false;
        e.where = "rebuilt stream disagrees on the window";
      }
    } catch (const std::exception& ex) {
      e.pass = false;
      e.where = ex.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---- suites over the induced module ------------------------------------

std::vector<std::pair<long, std::string>> pair_basis(const SuiteCtx& ctx) {
  const GradedModule& vmod = ctx.V->mod();
  std::vector<std::pair<long, std::string>> out;
  for (long i = 0; i < vmod.dim(); ++i) {
    long d = vmod.degree_of(i);
    if (d >= 1 && d <= ctx.cfg.depth) out.emplace_back(i, vmod.label(i));
  }
  return out;
}

std::vector<CheckEntry> suite_products(SuiteCtx& ctx) {
  if (!ctx.ensure_built()) return {construction_failure(ctx.build_issue)};
  std::vector<CheckEntry> out;
  auto cand = support_candidates(ctx.cfg.gamma);
  auto basis = pair_basis(ctx);
  for (const auto& [iu, lu] : basis)
    for (const auto& [iv, lv] : basis) {
      CheckEntry e;
      e.id = "translated(" + lu + " | " + lv + ")";
      e.anchor = "delta coefficients match the group-twisted products at each "
                 "support point";
      const OperatorField& Fu = ctx.M->ymap.at(iu);
      const OperatorField& Fv = ctx.M->ymap.at(iv);
      long du = ctx.V->mod().degree_of(iu), dv = ctx.V->mod().degree_of(iv);
      auto w = locality_witness(Fu, Fv, cand, du + dv + 2);
      if (!w) {
        e.pass = false;
        e.where = "no locality witness up to multiplicity " + std::to_string(du + dv + 2);
      } else {
        auto issues = translated_product_check(Fu, Fv, *w);
        if (!issues.empty()) {
          e.pass = false;
          e.where = issues.front();
        }
      }
      out.push_back(std::move(e));
    }
  return out;
}

std::vector<CheckEntry> suite_axioms(SuiteCtx& ctx) {
  if (!ctx.ensure_built()) return {construction_failure(ctx.build_issue)};
  VerifyOptions opt;
  opt.depth = ctx.cfg.depth;
  opt.win_lo = ctx.cfg.win_lo;
  opt.win_hi = ctx.cfg.win_hi;
  return verify_axioms(*ctx.M, *ctx.V, opt);
}

std::vector<CheckEntry> suite_commutator(SuiteCtx& ctx) {
  if (!ctx.ensure_built()) return {construction_failure(ctx.build_issue)};
  std::vector<CheckEntry> out;
  const LieData& lie = ctx.cfg.lie;
  for (long ja = 0; ja < lie.dim(); ++ja)
    for (long jb = 0; jb < lie.dim(); ++jb) {
      CheckEntry e;
      e.id = "formula(" + lie.labels[ja] + " | " + lie.labels[jb] + ")";
      e.anchor = "field bracket equals the group sum of derivative-delta terms "
                 "with twisted-product coefficients";
      Vec u = basis_vec(ctx.V->mod(), ctx.V->fock.index.at({{1, ja}}));
      Vec v = basis_vec(ctx.V->mod(), ctx.V->fock.index.at({{1, jb}}));
      try {
        auto chk = commutator_formula_check(*ctx.M, *ctx.V, u, v);
        if (!chk.issues.empty()) {
          e.pass = false;
          e.where = chk.issues.front();
        }
      } catch (const std::exception& ex) {
        e.pass = false;
        e.where = ex.what();
      }
      out.push_back(std::move(e));
    }
  return out;
}

std::vector<CheckEntry> suite_modes(SuiteCtx& ctx) {
  if (!ctx.ensure_built()) return {construction_failure(ctx.build_issue)};
  std::vector<CheckEntry> out;
  ModeExtraction ext = extract_mode_algebra(*ctx.M);
  {
    CheckEntry e;
    e.id = "round-trip";
    e.anchor = "mode actions read back from the fields reproduce the "
               "constructing action and its bracket relations";
    if (!ext.issues.empty()) {
      e.pass = false;
      e.where = ext.issues.front();
    }
    out.push_back(std::move(e));
  }
  {
    CheckEntry e;
    e.id = "level";
    e.anchor = "central element acts by the configured level";
    if (ext.level != ctx.cfg.level) {
      e.pass = false;
      e.lhs = ext.level.str();
      e.rhs = ctx.cfg.level.str();
      e.has_cell = true;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CheckEntry> suite_witness(SuiteCtx& ctx) {
  if (!ctx.ensure_built()) return {construction_failure(ctx.build_issue)};
  std::vector<CheckEntry> out;
  const LieData& lie = ctx.cfg.lie;
  auto cand = support_candidates(ctx.cfg.gamma);
  for (long ja = 0; ja < lie.dim(); ++ja)
    for (long jb = ja; jb < lie.dim(); ++jb) {
      CheckEntry e;
      e.id = "independence(" + lie.labels[ja] + " | " + lie.labels[jb] + ")";
      e.anchor = "products computed from two valid witnesses agree on the "
                 "shared validity window";
      const OperatorField& a = ctx.M->gen[ja];
      const OperatorField& b = ctx.M->gen[jb];
      auto p = locality_witness(a, b, cand, 4);
      if (!p) {
        e.pass = false;
        e.where = "no locality witness up to multiplicity 4";
        out.push_back(std::move(e));
        continue;
      }
      Witness bigger = *p;
      for (auto& [g, k] : bigger) ++k;
      try {
        auto m1 = nth_products(a, b, *p);
        auto m2 = nth_products(a, b, bigger);
        long cab = a.c + b.c;
        for (long n = -ctx.cfg.cutoff - 1; n <= witness_degree1(*p) + 1 && e.pass; ++n) {
          if (!field_equal(product_or_zero(m1, n, ctx.M->mod(), cab),
                           product_or_zero(m2, n, ctx.M->mod(), cab))) {
            e.pass = false;
            e.where = "products differ at order " + std::to_string(n);
          }
        }
      } catch (const std::exception& ex) {
        e.pass = false;
        e.where = ex.what();
      }
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace

const std::vector<std::string>& known_suite_names() {
  static const std::vector<std::string> names{"axioms",  "commutator", "delta",
                                              "modes",   "products",   "witness"};
  return names;
}

VerificationReport run_suite(const RunConfig& cfg) {
  VerificationReport rep;
  SuiteCtx ctx(cfg);
  std::set<std::string> seen;
  for (const std::string& s : cfg.suites) {
    if (!seen.insert(s).second) continue;
    std::vector<CheckEntry> es;
    if (s == "delta")
      es = suite_delta(ctx);
    else if (s == "products")
      es = suite_products(ctx);
    else if (s == "axioms")
      es = suite_axioms(ctx);
    else if (s == "commutator")
      es = suite_commutator(ctx);
    else if (s == "modes")
      es = suite_modes(ctx);
    else if (s == "witness")
      es = suite_witness(ctx);
    prefix_ids(es, s);
    rep.entries.insert(rep.entries.end(), std::make_move_iterator(es.begin()),
                       std::make_move_iterator(es.end()));
  }
  normalize(rep);
  return rep;
}

}  // namespace qmi

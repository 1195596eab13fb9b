#include "qmi/config.hpp"

#include "qmi/suites.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qmi {

namespace {

using ojson = nlohmann::ordered_json;
using Kind = config_error::Kind;

[[noreturn]] void fail(Kind k, const std::string& msg) { throw config_error(k, msg); }

long line_of_byte(const std::string& text, size_t byte) {
  long line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

const ojson& field(const ojson& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(Kind::parse, "config field \"" + path + "." + key + "\" is missing");
  return j.at(key);
}

long integer_at(const ojson& j, const std::string& path) {
  if (!j.is_number_integer())
    fail(Kind::parse, "config field \"" + path + "\" must be an integer");
  return j.get<long>();
}

std::string string_at(const ojson& j, const std::string& path) {
  if (!j.is_string())
    fail(Kind::parse, "config field \"" + path + "\" must be a string");
  return j.get<std::string>();
}

Rational rational_at(const ojson& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer())
    fail(Kind::parse,
         "config field \"" + path + "\" must be a [numerator, denominator] pair");
  long num = j[0].get<long>(), den = j[1].get<long>();
  if (den == 0)
    fail(Kind::invalid_rational, "config field \"" + path + "\" has denominator 0");
  return Rational(num, den);
}

Mat matrix_at(const ojson& j, const std::string& path, long rows, long cols) {
  if (!j.is_array() || long(j.size()) != rows)
    fail(Kind::parse, "config field \"" + path + "\" must be a " + std::to_string(rows) +
                          "-row matrix");
  Mat m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const ojson& row = j[r];
    if (!row.is_array() || long(row.size()) != cols)
      fail(Kind::parse, "config field \"" + path + "[" + std::to_string(r) +
                            "]\" must have " + std::to_string(cols) + " entries");
    for (long c = 0; c < cols; ++c)
      m(r, c) = rational_at(row[c], path + "[" + std::to_string(r) + "][" +
                                        std::to_string(c) + "]");
  }
  return m;
}

LieData algebra_from(const ojson& j) {
  if (j.contains("builtin")) {
    std::string name = string_at(j.at("builtin"), "algebra.builtin");
    if (name == "heisenberg1") return lie_abelian(1);
    if (name == "sl2") return lie_sl2();
    fail(Kind::invalid_value,
         "unknown builtin algebra \"" + name + "\" (known: heisenberg1, sl2)");
  }
  LieData d;
  const ojson& labels = field(j, "algebra", "labels");
  if (!labels.is_array() || labels.empty())
    fail(Kind::parse, "config field \"algebra.labels\" must be a nonempty array");
  for (size_t i = 0; i < labels.size(); ++i)
    d.labels.push_back(string_at(labels[i], "algebra.labels[" + std::to_string(i) + "]"));
  long n = d.dim();
  const ojson& ad = field(j, "algebra", "ad");
  if (!ad.is_array() || long(ad.size()) != n)
    fail(Kind::parse, "config field \"algebra.ad\" must hold one matrix per generator");
  for (long i = 0; i < n; ++i)
    d.ad.push_back(matrix_at(ad[i], "algebra.ad[" + std::to_string(i) + "]", n, n));
  d.gram = matrix_at(field(j, "algebra", "gram"), "algebra.gram", n, n);
  return d;
}

GammaData gamma_from(const ojson& j, long dim) {
  if (j.contains("builtin")) {
    std::string name = string_at(j.at("builtin"), "gamma.builtin");
    if (name == "trivial") return gamma_trivial(dim);
    if (name == "negation") return gamma_zmod2_negation(dim);
    fail(Kind::invalid_value,
         "unknown builtin group \"" + name + "\" (known: trivial, negation)");
  }
  const ojson& els = field(j, "gamma", "elements");
  if (!els.is_array() || els.empty())
    fail(Kind::parse, "config field \"gamma.elements\" must be a nonempty array");
  GammaData g;
  for (size_t t = 0; t < els.size(); ++t) {
    std::string path = "gamma.elements[" + std::to_string(t) + "]";
    const ojson& el = els[t];
    GammaElement ge;
    ge.action = matrix_at(field(el, path, "action"), path + ".action", dim, dim);
    const ojson& psi = field(el, path, "psi");
    ge.psi.alpha = rational_at(field(psi, path + ".psi", "alpha"), path + ".psi.alpha");
    ge.psi.beta = rational_at(field(psi, path + ".psi", "beta"), path + ".psi.beta");
    g.elements.push_back(std::move(ge));
  }
  long ord = g.order();
  g.mul.assign(ord, std::vector<long>(ord, -1));
  for (long i = 0; i < ord; ++i)
    for (long j2 = 0; j2 < ord; ++j2) {
      Mat prod = g.elements[i].action * g.elements[j2].action;
      LinearMap pc = compose(g.elements[i].psi, g.elements[j2].psi);
      for (long k = 0; k < ord; ++k)
        if (mat_equal(prod, g.elements[k].action) && pc.alpha == g.elements[k].psi.alpha &&
            pc.beta == g.elements[k].psi.beta) {
          g.mul[i][j2] = k;
          break;
        }
      if (g.mul[i][j2] < 0)
        fail(Kind::invalid_value, "gamma.elements is not closed under composition at (" +
                                      std::to_string(i) + ", " + std::to_string(j2) + ")");
    }
  return g;
}

std::string describe(const ojson& j, const std::string& dflt) {
  if (j.contains("builtin") && j.at("builtin").is_string())
    return j.at("builtin").get<std::string>();
  return dflt;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    fail(Kind::parse, "config parse error at line " +
                          std::to_string(line_of_byte(text, ex.byte)) + ": " + ex.what());
  }
  if (!j.is_object()) fail(Kind::parse, "config root must be an object");

  RunConfig cfg;
  const ojson& alg = field(j, "config", "algebra");
  cfg.lie = algebra_from(alg);
  cfg.algebra_name = describe(alg, "inline(" + std::to_string(cfg.lie.dim()) + ")");
  const ojson& gam = field(j, "config", "gamma");
  cfg.gamma = gamma_from(gam, cfg.lie.dim());
  cfg.gamma_name =
      describe(gam, "inline(order " + std::to_string(cfg.gamma.order()) + ")");

  const ojson& run = field(j, "config", "run");
  cfg.level = rational_at(field(run, "run", "level"), "run.level");
  cfg.cutoff = integer_at(field(run, "run", "cutoff"), "run.cutoff");
  if (cfg.cutoff < 0) fail(Kind::invalid_value, "run.cutoff must be nonnegative");
  const ojson& win = field(run, "run", "window");
  if (!win.is_array() || win.size() != 2)
    fail(Kind::parse, "config field \"run.window\" must be an [lo, hi] pair");
  cfg.win_lo = integer_at(win[0], "run.window[0]");
  cfg.win_hi = integer_at(win[1], "run.window[1]");
  if (cfg.win_lo > cfg.win_hi)
    fail(Kind::invalid_value, "run.window floor exceeds its ceiling");
  if (run.contains("depth")) {
    cfg.depth = integer_at(run.at("depth"), "run.depth");
    if (cfg.depth < 0) fail(Kind::invalid_value, "run.depth must be nonnegative");
  }
  const ojson& suites = field(run, "run", "suites");
  if (!suites.is_array())
    fail(Kind::parse, "config field \"run.suites\" must be an array");
  const std::vector<std::string>& known = known_suite_names();
  for (size_t i = 0; i < suites.size(); ++i) {
    std::string s = string_at(suites[i], "run.suites[" + std::to_string(i) + "]");
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      fail(Kind::unknown_suite, "unknown suite \"" + s + "\" (known suites: " + list + ")");
    }
    cfg.suites.push_back(std::move(s));
  }
  if (run.contains("out")) cfg.out = string_at(run.at("out"), "run.out");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Kind::io, "cannot open config file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qmi

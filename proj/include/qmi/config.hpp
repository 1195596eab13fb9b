#pragma once

#include "qmi/lie_algebra.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qmi {

struct config_error : std::runtime_error {
  enum class Kind { io, parse, unknown_suite, invalid_rational, invalid_value };
  Kind kind;
  config_error(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

/// A resolved run configuration: the algebra and automorphism group (builtin
/// or inline structure data), the level, the depth cutoff, the comparison
/// window, the suites to run, and an optional output path.
struct RunConfig {
  std::string algebra_name;
  LieData lie;
  std::string gamma_name;
  GammaData gamma;
  Rational level = 1;
  long cutoff = 6;
  long win_lo = -12;
  long win_hi = 12;
  long depth = 2;
  std::vector<std::string> suites;
  std::string out;
};

/// Parses and validates a JSON config file (top-level keys algebra, gamma,
/// run; rationals as [numerator, denominator] integer pairs; schema in the
/// README).  Errors carry the offending line or field: Kind::parse for
/// malformed text or missing/ill-typed fields, Kind::invalid_rational for a
/// zero denominator, Kind::unknown_suite for a suite name outside the known
/// set, Kind::invalid_value for violated range invariants.
RunConfig load_config(const std::string& path);

/// Same parse and validation on an in-memory document.
RunConfig parse_config(const std::string& text);

}  // namespace qmi

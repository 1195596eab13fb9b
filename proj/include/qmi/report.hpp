#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qmi {

struct report_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One verification check: identifier, the statement it instantiates, the
/// outcome, and on failure the offending location plus both coefficient
/// values when a single cell witnesses the disagreement.
struct CheckEntry {
  std::string id;
  std::string anchor;
  bool pass = true;
  std::string where;
  long e1 = 0, e2 = 0;
  std::string lhs, rhs;
  bool has_cell = false;
};

struct VerificationReport {
  std::vector<CheckEntry> entries;
};

inline bool all_pass(const VerificationReport& r) {
  for (const auto& e : r.entries)
    if (!e.pass) return false;
  return true;
}

/// Sorts entries by identifier.  Report assembly normalizes through this, so
/// neither suite order nor concurrent execution changes the emitted bytes.
void normalize(VerificationReport& r);

enum class ReportFormat { human, machine };

/// "human" or "machine"; anything else throws report_error.
ReportFormat parse_format(const std::string& name);

/// Deterministic serialization.  The machine format is JSON with fixed key
/// order (schema documented in the README); the human format is an aligned
/// text table with one line per check and detail lines under failures.
std::string emit_report(const VerificationReport& r, ReportFormat f);

/// Inverse of the machine format.  Throws report_error on malformed input.
VerificationReport parse_report(const std::string& bytes);

/// emit_report to a file; throws report_error when the path cannot be
/// written.
void write_report_file(const VerificationReport& r, ReportFormat f,
                       const std::string& path);

}  // namespace qmi

#include "qmi/report.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace qmi {

void normalize(VerificationReport& r) {
  std::sort(r.entries.begin(), r.entries.end(),
            [](const CheckEntry& a, const CheckEntry& b) { return a.id < b.id; });
}

ReportFormat parse_format(const std::string& name) {
  if (name == "human") return ReportFormat::human;
  if (name == "machine") return ReportFormat::machine;
  throw report_error("unknown report format \"" + name + "\" (use human or machine)");
}

namespace {

using ojson = nlohmann::ordered_json;

long count_failures(const VerificationReport& r) {
  long k = 0;
  for (const auto& e : r.entries)
    if (!e.pass) ++k;
  return k;
}

std::string emit_machine(const VerificationReport& r) {
  ojson j;
  j["schema"] = "verification-report/1";
  j["summary"] = {{"checks", r.entries.size()}, {"failures", count_failures(r)}};
  ojson es = ojson::array();
  for (const CheckEntry& e : r.entries) {
    ojson je;
    je["id"] = e.id;
    je["anchor"] = e.anchor;
    je["pass"] = e.pass;
    je["where"] = e.where;
    if (e.has_cell)
      je["cell"] = {{"exponents", {e.e1, e.e2}}, {"lhs", e.lhs}, {"rhs", e.rhs}};
    else
      je["cell"] = nullptr;
    es.push_back(std::move(je));
  }
  j["entries"] = std::move(es);
  return j.dump(2) + "\n";
}

std::string emit_human(const VerificationReport& r) {
  size_t width = 0;
  for (const CheckEntry& e : r.entries) width = std::max(width, e.id.size());
  std::string out;
  for (const CheckEntry& e : r.entries) {
    out += e.pass ? "ok    " : "FAIL  ";
    out += e.id;
    out.append(width - e.id.size() + 2, ' ');
    out += e.anchor;
    out += '\n';
    if (!e.pass) {
      out += "      at " + (e.where.empty() ? std::string("(unlocated)") : e.where);
      if (e.has_cell)
        out += "; cell (" + std::to_string(e.e1) + "," + std::to_string(e.e2) +
               "): lhs " + e.lhs + ", rhs " + e.rhs;
      out += '\n';
    }
  }
  long failed = count_failures(r);
  out += std::to_string(r.entries.size()) + " checks, " + std::to_string(failed) +
         (failed == 1 ? " failure\n" : " failures\n");
  return out;
}

}  // namespace

std::string emit_report(const VerificationReport& r, ReportFormat f) {
  return f == ReportFormat::machine ? emit_machine(r) : emit_human(r);
}

VerificationReport parse_report(const std::string& bytes) {
  ojson j;
  try {
    j = ojson::parse(bytes);
  } catch (const nlohmann::json::parse_error& ex) {
    throw report_error(std::string("report parse error: ") + ex.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "verification-report/1")
      throw report_error("unrecognized report schema");
    VerificationReport r;
    for (const ojson& je : j.at("entries")) {
      CheckEntry e;
      e.id = je.at("id").get<std::string>();
      e.anchor = je.at("anchor").get<std::string>();
      e.pass = je.at("pass").get<bool>();
      e.where = je.at("where").get<std::string>();
      const ojson& cell = je.at("cell");
      if (!cell.is_null()) {
        e.has_cell = true;
        e.e1 = cell.at("exponents").at(0).get<long>();
        e.e2 = cell.at("exponents").at(1).get<long>();
        e.lhs = cell.at("lhs").get<std::string>();
        e.rhs = cell.at("rhs").get<std::string>();
      }
      r.entries.push_back(std::move(e));
    }
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw report_error(std::string("report parse error: ") + ex.what());
  }
}

void write_report_file(const VerificationReport& r, ReportFormat f,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw report_error("cannot open \"" + path + "\" for writing");
  out << emit_report(r, f);
  out.flush();
  if (!out) throw report_error("write to \"" + path + "\" failed");
}

}  // namespace qmi

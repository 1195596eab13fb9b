#pragma once

#include "qmi/config.hpp"
#include "qmi/report.hpp"

namespace qmi {

/// Names run_suite understands, sorted.
const std::vector<std::string>& known_suite_names();

/// Runs every suite the config lists and assembles one normalized report.
/// Construction failures of the induced module surface as failing entries,
/// not exceptions, so a corrupted input flips the exit code rather than
/// aborting the run.
VerificationReport run_suite(const RunConfig& cfg);

}  // namespace qmi

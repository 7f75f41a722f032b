#pragma once

#include <iosfwd>
#include <string>

#include "morsehom/config.hpp"

namespace morsehom {

/// Exit code contract:
///   0  success
///   1  config / parameter errors
///   2  retryable transversality exhaustion
///   3  validation failures (isolation, locality, census, undecided flow)
struct RunOutcome {
    int exit_code = 0;
    std::string report_json;  // the report that was (or would be) written
};

/// Execute one command; writes <out_dir>/report.json plus CSV artifacts when
/// out_dir is non-empty. Log lines go to `log` when verbose.
RunOutcome run_command(const RunConfig& cfg, const std::string& out_dir, std::ostream& log,
                       bool verbose);

}  // namespace morsehom

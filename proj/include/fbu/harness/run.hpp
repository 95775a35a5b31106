#ifndef FBU_HARNESS_RUN_HPP
#define FBU_HARNESS_RUN_HPP

#include <iosfwd>

#include "fbu/harness/config.hpp"
#include "fbu/harness/report.hpp"

namespace fbu {

/// Executes one run: solves in dependency order (two-body before three-body),
/// writes <out>/<name>.csv and <out>/<name>.summary.json, returns the report.
/// Individual point failures are recorded in the report, not thrown.
SweepReport execute_run(const RunConfig& rc, std::ostream& log);

/// All runs of a parsed config; returns 0 only if every acceptance flag of
/// every run passed.
int run_config(const ParsedConfig& pc, std::ostream& log);
int run_config_file(const std::string& path, std::ostream& log);

}  // namespace fbu

#endif

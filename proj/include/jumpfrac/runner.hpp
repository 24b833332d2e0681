#pragma once

#include <string>
#include <vector>

#include "jumpfrac/config.hpp"
#include "jumpfrac/parallel.hpp"

namespace jumpfrac {

struct RunOutcome {
  int exit_code = 0;  ///< 0 ok, 1 validation failure, 2 numerical failure
  std::string summary;
  std::vector<std::string> artifacts;  ///< paths written, empty on failure
};

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand and writes its artifacts into cfg.output_dir.
/// Artifacts are staged and renamed into place only on success.
RunOutcome run_subcommand(const std::string& name, const RunConfig& cfg, Parallelism par = {});

}  // namespace jumpfrac

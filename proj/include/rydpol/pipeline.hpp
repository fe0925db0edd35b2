#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rydpol/config.hpp"

namespace rydpol {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNotConverged = 3, kExitIo = 4 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;  // file names relative to the output directory
  json status = json::object();
  std::string message;
};

// Runs the pipeline selected by config.mode and writes its artifacts and a
// manifest into config.out_dir. Errors are mapped to exit codes, never thrown.
RunOutcome run(const RunConfig& config);

// Reads a field container and writes the requested slice as columns.
void regrid_and_export(const std::filesystem::path& field_file, const SliceSpec& spec,
                       const std::filesystem::path& out_file);

}  // namespace rydpol

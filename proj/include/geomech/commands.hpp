#pragma once

// Subcommand dispatch shared by the C API and the command-line tool. Every
// command returns a report envelope
//
//   {tool_version, command, system, seed, samples, tolerances, verdict, result}
//
// built with insertion-ordered JSON so identical inputs serialize identically.

#include <string>
#include <string_view>
#include <vector>

#include "geomech/report.hpp"
#include "geomech/system_spec.hpp"

namespace gm {

struct CommandOutcome {
  Json report;
  bool pass = false;
  bool precondition_failed = false;
};

const std::vector<std::string>& command_names();

/// Run `command` against `spec`. Precondition failures become a failing
/// report with a "precondition" block; every other error propagates.
CommandOutcome run_command(const SystemSpec& spec, std::string_view command, const Json& options);

}  // namespace gm

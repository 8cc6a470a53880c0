// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <string>
#include <vector>

namespace nhs::cli {

/// Full command-line entry point: args excludes the program name, e.g.
/// {"gershgorin", "--config", "run.json", "--output", "out"}. Writes
/// report.json (deterministic body), report.meta.json (timestamps) and the
/// subcommand's CSV artifacts into the output directory.
///
/// Exit codes: 0 success, 2 config error, 3 numerical failure,
/// 4 precondition violation, 1 unexpected failure.
int run(const std::vector<std::string>& args);

}  // namespace nhs::cli

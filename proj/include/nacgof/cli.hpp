/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nacgof {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

/// Parses args (without the program name) and runs the selected subcommand.
/// Primary results go to `out` unless an output path is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nacgof

// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "emloc/config.hpp"

namespace emloc {

/// Dispatches the configured experiment, writes its CSV reports (and VTK
/// exports when enabled) into the output directory, and returns the process
/// exit code: 0 on success, 1 when an internal check fails, 2 on bad input.
/// Progress and check outcomes go to the log stream.
int run_experiment(const ExperimentConfig& config, std::ostream& log,
                   const std::string& out_dir_override = "");

}  // namespace emloc

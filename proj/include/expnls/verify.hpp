// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace expnls {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyConfig {
    std::optional<double> omega;  // restrict the per-case criteria to one frequency
    std::optional<int> mu;
    bool verbose = false;
};

// Runs the acceptance criteria (fixed grids, fixed tolerances) and returns
// one row per criterion.  All thresholds are pinned here, not configurable.
std::vector<CriterionResult> run_acceptance(const VerifyConfig& cfg = {});

// Prints the pass/fail table; returns the number of failures.
int print_acceptance(const std::vector<CriterionResult>& rows);

}  // namespace expnls

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expnls/spectral.hpp"

namespace expnls {

// The single real growing mode of the linearized Hamiltonian system
//   L_- v2 = lambda v1,  -L_+ v1 = lambda v2
// on the radial sector.  residual is the max first-order-system defect over
// (|v1| + |v2|).
struct GrowingMode {
    double lambda = 0.0;
    std::vector<double> v1;
    std::vector<double> v2;
    double residual = 0.0;
    int sector = 0;
    double lambda_sq_rayleigh = 0.0;  // composed-operator eigenvalue estimate
    double second_candidate = 0.0;    // next eigenvalue of the composed operator (<= 0)
};

struct GrowingModeConfig {
    double residual_tol = 1e-6;
    int max_iterations = 400;
    int sector_scan_max = 3;  // sectors l = 1..sector_scan_max checked for extra modes
};

GrowingMode growing_mode(const ProfileSolution& sol, const GrowingModeConfig& cfg = {});

struct GrowthFitConfig {
    double dt = 5e-4;
    double sample_every = 0.02;
    double horizon = 0.0;  // 0: auto from the spectral rate
};

// Seeds the soliton with epsilon times the growing mode, evolves the full
// equation, and fits the slope of log |(|u|) - phi| over the window where the
// deviation sits between 10 and 100 times the seed.
double growth_rate_from_dynamics(const ProfileSolution& sol, const GrowingMode& mode,
                                 double perturbation_scale, const GrowthFitConfig& cfg = {});

}  // namespace expnls

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "expnls/grid.hpp"
#include "expnls/model.hpp"

namespace expnls {

struct ShootConfig {
    double amp_lo = 0.05;       // amplitude continuation bracket
    double amp_hi = 2.5;
    int scan_points = 40;       // coarse scan resolution for the sign change
    double newton_tol = 1e-12;  // max-norm residual of the discrete equation
    int newton_max = 200;
    double amp_rel_tol = 1e-14; // bisection width on the amplitude
};

// The computed solitary-wave profile with its diagnostics.  The field is
// strictly positive and strictly decreasing (bell-shaped); the gradient norm
// sits strictly inside (0, 1).
struct ProfileSolution {
    ModelParams params;
    RadialField field;
    double amplitude = 0.0;       // extrapolated phi(0)
    double grad_norm_sq = 0.0;
    double mass = 0.0;
    double action = 0.0;
    double energy = 0.0;
    double pohozaev_42_residual = 0.0;
    double pohozaev_45_residual = 0.0;
    double decay_rate_fit = 0.0;
    double equation_residual = 0.0;  // max-norm of the discrete profile equation
};

// Solves -Delta phi + omega phi = f_mu(phi) on the radial grid as a nonlinear
// boundary-value problem: damped Newton at fixed first-node amplitude, an
// amplitude bracket located by the sign change of the released node-0
// equation, bisection, then a free Newton polish on the full system.
ProfileSolution shoot_profile(const ModelParams& p,
                              std::shared_ptr<const RadialGrid> grid,
                              const ShootConfig& cfg = {});

// Max-norm of -Delta_0 v + omega v - f_mu(v) over all nodes.
double residual_eq20(std::span<const double> v, const ModelParams& p, const RadialGrid& g);

struct PohozaevResiduals {
    double r42 = 0.0;  // (omega/2)|phi|^2 = int F_mu(phi)
    double r45 = 0.0;  // |grad phi|^2 + omega |phi|^2 = int f_mu(phi) phi
};
PohozaevResiduals pohozaev_check(const ProfileSolution& sol);

// Least-squares slope of log(phi * sqrt(r)) over the tail window
// [0.5, 0.9] * r_max; returns the decay rate (positive).
double fit_decay(const ProfileSolution& sol);
double fit_decay(std::span<const double> values, const RadialGrid& g);

// lambda * phi(lambda x), cubic interpolation back onto the original grid.
// Mass is invariant and the gradient norm scales by lambda^2 exactly in the
// continuum; both hold to interpolation accuracy here.
RadialField rescale(const ProfileSolution& sol, double lambda);

}  // namespace expnls

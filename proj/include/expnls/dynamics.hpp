// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "expnls/model.hpp"
#include "expnls/profile.hpp"

namespace expnls {

// Scalar monitors sampled along a trajectory.  mass and energy are the
// discrete conserved quantities (plain w-sums paired with the discrete
// operator); the implicit midpoint scheme keeps mass constant to solver
// tolerance and energy to O(dt^2).
struct EvolutionState {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double grad_norm_sq = 0.0;
    double virial_moment = 0.0;  // int |x|^2 |u|^2
    double virial_i = 0.0;
    ComplexField field;          // populated when keep_fields is set, and for the final state
};

enum class Outcome { Completed, BlowupDetected, StepFailure };

struct TrajectoryReport {
    ModelParams params;
    std::vector<EvolutionState> states;
    Outcome outcome = Outcome::Completed;
    std::optional<double> blowup_time_estimate;
    double virial_identity_residual = 0.0;  // 0 when fewer than 5 samples
    ComplexField final_field;
};

struct EvolveConfig {
    double dt = 1e-3;
    double t_end = 20.0;
    double sample_every = 0.05;
    double delta_blowup = 0.05;   // stop once |grad u|^2 >= 1 - delta
    double fp_tol = 5e-14;        // fixed-point tolerance, relative
    int fp_max = 50;
    int max_halvings = 6;
    bool keep_fields = false;
    bool linear_only = false;     // drop the nonlinearity (free propagation)
    std::function<void(double, std::span<const Complex>)> observer;
};

EvolveConfig default_evolve_config(const ModelParams& p);

// Implicit-midpoint (Crank-Nicolson) integration of
//   i u_t + Delta u + f_mu(u) = 0
// on the radial grid, fixed-point iteration on the nonlinearity with the
// Laplacian solved implicitly.  Requires |grad u0|^2 < 1.
TrajectoryReport evolve(const ComplexField& u0, const ModelParams& p, const EvolveConfig& cfg);

// Max over interior samples of |d^2/dt^2 |x u|^2 - 8 I_mu(u)| divided by the
// virial scale of the run; terminal blow-up samples are excluded.
double virial_check(const TrajectoryReport& report);

struct BlowupRow {
    double lambda = 0.0;
    double energy = 0.0;
    double virial_i = 0.0;
    double action = 0.0;
    double grad_norm_sq = 0.0;
    double variance = 0.0;       // int |x|^2 |Phi_lambda|^2
    bool energy_positive = false;
    bool virial_negative = false;
    bool action_below = false;
    bool gradient_below_one = false;
    bool kminus_member = false;
    bool conditions_ok = false;  // all of the above
    Outcome outcome = Outcome::Completed;
    std::optional<double> blowup_time_estimate;
};

// For each lambda: rescale the soliton, check the blow-up hypotheses
// numerically, classify the K-set membership, and evolve.  Rows that fail the
// hypotheses are flagged but still evolved.
std::vector<BlowupRow> blowup_experiment(const ProfileSolution& sol,
                                         std::span<const double> lambdas,
                                         const EvolveConfig& cfg);

}  // namespace expnls

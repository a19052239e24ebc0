// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "expnls/errors.hpp"
#include "expnls/dynamics.hpp"
#include "expnls/stability.hpp"

using namespace expnls;

namespace {
const ProfileSolution& soliton() {
    static ProfileSolution sol = shoot_profile(ModelParams{1.0, 0}, make_grid(20.0, 4096));
    return sol;
}
}  // namespace

TEST_CASE("growing mode: single positive rate with certified residual") {
    const ProfileSolution& sol = soliton();
    GrowingMode mode = growing_mode(sol);
    std::printf("[measure] lambda=%.9g residual=%.3e second=%.3e\n", mode.lambda, mode.residual,
                mode.second_candidate);
    // regression lock from the first verified run (r_max=20, n=4096)
    CHECK(mode.lambda == doctest::Approx(25.5536054).epsilon(1e-5));
    CHECK(mode.residual < 1e-6);
    CHECK(mode.sector == 0);
    // composed-operator eigenvalue agrees with the first-order rate
    CHECK(std::abs(mode.lambda_sq_rayleigh - mode.lambda * mode.lambda) <
          1e-8 * mode.lambda * mode.lambda);
    // uniqueness: the deflated second candidate is not another growing mode
    CHECK(mode.second_candidate <= 1e-4 * mode.lambda_sq_rayleigh);
}

TEST_CASE("growing mode: sign symmetry of the first-order system") {
    const ProfileSolution& sol = soliton();
    const RadialGrid& g = *sol.field.grid;
    GrowingMode mode = growing_mode(sol);
    // (lambda, v1, v2) -> (-lambda, v1, -v2) also solves the pair
    SectorOperator lp(sol, Which::Plus, 0), lm(sol, Which::Minus, 0);
    std::vector<double> v2m(g.n);
    for (int j = 0; j < g.n; ++j) v2m[j] = -mode.v2[j];
    std::vector<double> r1 = lm.apply(v2m);
    for (int j = 0; j < g.n; ++j) r1[j] -= (-mode.lambda) * mode.v1[j];
    std::vector<double> r2 = lp.apply(mode.v1);
    for (int j = 0; j < g.n; ++j) r2[j] += (-mode.lambda) * v2m[j];
    const double denom = norm_w(mode.v1, g) + norm_w(v2m, g);
    const double res = std::max(norm_w(r1, g), norm_w(r2, g)) / denom;
    CHECK(res < 1e-6);
}

TEST_CASE("growing mode: stable under grid doubling within 1 percent") {
    ProfileSolution coarse = shoot_profile(ModelParams{1.0, 0}, make_grid(20.0, 2048));
    ProfileSolution fine = shoot_profile(ModelParams{1.0, 0}, make_grid(20.0, 4096));
    const double l1 = growing_mode(coarse).lambda;
    const double l2 = growing_mode(fine).lambda;
    std::printf("[measure] lambda n=2048: %.8g n=4096: %.8g drift=%.3e\n", l1, l2,
                std::abs(l1 - l2) / l2);
    CHECK(std::abs(l1 - l2) / l2 < 0.01);
}

TEST_CASE("growing mode for mu=1") {
    ProfileSolution sol1 = shoot_profile(ModelParams{1.0, 1}, make_grid(20.0, 4096));
    GrowingMode mode1 = growing_mode(sol1);
    std::printf("[measure] mu=1 lambda=%.9g residual=%.3e second=%.3e\n", mode1.lambda,
                mode1.residual, mode1.second_candidate);
    // regression lock from the first verified run (r_max=20, n=4096)
    CHECK(mode1.lambda == doctest::Approx(166.407616).epsilon(1e-5));
    CHECK(mode1.residual < 1e-6);
    CHECK(mode1.second_candidate <= 1e-4 * mode1.lambda_sq_rayleigh);
}

TEST_CASE("no growing mode without a soliton potential") {
    // zero field: both linearized operators reduce to -Delta + omega
    auto grid = make_grid(20.0, 1024);
    ModelParams p{1.0, 0};
    ProfileSolution fake;
    fake.params = p;
    fake.field.grid = grid;
    fake.field.values.assign(grid->n, 0.0);
    CHECK_THROWS_AS(growing_mode(fake), stability_error);
}

TEST_CASE("nonlinear growth rate matches the spectral rate within 10 percent") {
    const ProfileSolution& sol = soliton();
    GrowingMode mode = growing_mode(sol);
    const double eps = 2e-5 * norm_w(sol.field.values, *sol.field.grid);
    const double fit = growth_rate_from_dynamics(sol, mode, eps);
    std::printf("[measure] spectral=%.6f dynamics fit=%.6f agreement=%.2f%%\n", mode.lambda,
                fit, 100.0 * std::abs(fit - mode.lambda) / mode.lambda);
    CHECK(std::abs(fit - mode.lambda) < 0.10 * mode.lambda);
    // halving the seed moves the fit by little (linear-regime check)
    const double fit2 = growth_rate_from_dynamics(sol, mode, 0.5 * eps);
    CHECK(std::abs(fit2 - fit) < 0.02 * fit);
}

TEST_CASE("phase-direction perturbation does not grow") {
    const ProfileSolution& sol = soliton();
    const RadialGrid& g = *sol.field.grid;
    const double eps = 1e-5;
    ComplexField u0{sol.field.grid, {}};
    u0.values.reserve(g.n);
    for (double v : sol.field.values) u0.values.emplace_back(v, eps * v);
    EvolveConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 0.2;
    cfg.sample_every = 0.02;
    double worst = 0.0;
    cfg.observer = [&](double, std::span<const Complex> u) {
        std::vector<double> d(g.n);
        for (int j = 0; j < g.n; ++j) d[j] = std::abs(u[j]) - sol.field.values[j];
        worst = std::max(worst, norm_w(d, g));
    };
    evolve(u0, sol.params, cfg);
    const double scale = eps * norm_w(sol.field.values, g);
    std::printf("[measure] phase-direction drift %.3e vs seed %.3e\n", worst, scale);
    CHECK(worst < 10.0 * scale);
}

TEST_CASE("growth fit rejects an oversized seed") {
    const ProfileSolution& sol = soliton();
    GrowingMode mode = growing_mode(sol);
    CHECK_THROWS_AS(growth_rate_from_dynamics(sol, mode, 1.0), parameter_error);
}

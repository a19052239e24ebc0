// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "expnls/errors.hpp"
#include "expnls/profile.hpp"

using namespace expnls;

TEST_CASE("profile omega=1 mu=0: identities, shape, threshold") {
    ModelParams p{1.0, 0};
    auto grid = make_grid(20.0, 8192);
    ProfileSolution sol = shoot_profile(p, grid);
    std::printf("[measure] w=1 mu=0: amp=%.12g grad=%.12g mass=%.12g action=%.12g E=%.12g\n",
                sol.amplitude, sol.grad_norm_sq, sol.mass, sol.action, sol.energy);
    std::printf("[measure] r42=%.3e r45=%.3e decay=%.8g eqres=%.3e\n",
                sol.pohozaev_42_residual, sol.pohozaev_45_residual, sol.decay_rate_fit,
                sol.equation_residual);
    CHECK(sol.equation_residual < 1e-9);
    // multiplier identity: exact discrete pairing, machine zero
    CHECK(sol.pohozaev_45_residual < 1e-10);
    // scaling identity: O(h^2) with C ~ 0.6 at this grid
    CHECK(sol.pohozaev_42_residual < 1e-5);
    CHECK(sol.grad_norm_sq > 0.0);
    CHECK(sol.grad_norm_sq < 1.0);
    CHECK(std::abs(sol.decay_rate_fit - 1.0) < 0.02);
    for (int j = 1; j < grid->n; ++j) {
        CHECK(sol.field.values[j] > 0.0);
        CHECK(sol.field.values[j] < sol.field.values[j - 1]);
    }
}

TEST_CASE("profile regression baselines, omega=1 mu=0 at r_max=20 n=8192") {
    // locked after the first verified run; deterministic algorithm
    ModelParams p{1.0, 0};
    ProfileSolution sol = shoot_profile(p, make_grid(20.0, 8192));
    CHECK(sol.amplitude == doctest::Approx(0.50032457).epsilon(2e-5));
    CHECK(sol.grad_norm_sq == doctest::Approx(0.46784764).epsilon(2e-5));
    CHECK(sol.mass == doctest::Approx(0.23923660).epsilon(2e-5));
}

TEST_CASE("pohozaev residual 42 decays at order two") {
    ModelParams p{1.0, 0};
    ProfileSolution coarse = shoot_profile(p, make_grid(20.0, 2048));
    ProfileSolution fine = shoot_profile(p, make_grid(20.0, 4096));
    const double ratio = coarse.pohozaev_42_residual / fine.pohozaev_42_residual;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("random positive field is far from satisfying the identities") {
    ModelParams p{1.0, 0};
    auto grid = make_grid(20.0, 2048);
    ProfileSolution fake;
    fake.params = p;
    fake.field.grid = grid;
    fake.field.values.resize(grid->n);
    for (int j = 0; j < grid->n; ++j)
        fake.field.values[j] = 0.4 * std::exp(-0.3 * grid->r[j] * grid->r[j]);
    const PohozaevResiduals res = pohozaev_check(fake);
    CHECK(res.r42 > 0.05);
    CHECK(res.r45 > 0.05);
}

TEST_CASE("residual evaluator: zero field, gaussian non-solution vs symbolic") {
    ModelParams p{1.0, 0};
    auto grid = make_grid(20.0, 4096);
    std::vector<double> zero(grid->n, 0.0);
    CHECK(residual_eq20(zero, p, *grid) == 0.0);

    std::vector<double> gauss(grid->n);
    for (int j = 0; j < grid->n; ++j) gauss[j] = std::exp(-grid->r[j] * grid->r[j]);
    const double res = residual_eq20(gauss, p, *grid);
    CHECK(res > 0.1);
    // symbolic: -Delta v + v - f(v) with v = e^{-r^2}
    double symb = 0.0;
    for (int j = 0; j < grid->n; ++j) {
        const double r = grid->r[j];
        const double v = gauss[j];
        symb = std::max(symb, std::abs((4.0 - 4.0 * r * r) * v + v - f_mu(v, p)));
    }
    CHECK(std::abs(res - symb) < 2e-3 * symb);
}

TEST_CASE("manufactured solution: discrete operator consistency at order 2") {
    // with the nonlinearity replaced by the matching source, v = e^{-r^2} is
    // exact; the discrete residual must shrink at order 2
    auto resid_at = [](int n) {
        auto grid = make_grid(10.0, n);
        std::vector<double> v(grid->n), lap(grid->n);
        for (int j = 0; j < grid->n; ++j) v[j] = std::exp(-grid->r[j] * grid->r[j]);
        radial_laplacian_apply(std::span<const double>(v), 0, *grid, lap);
        double worst = 0.0;
        for (int j = 0; j < grid->n; ++j) {
            const double r = grid->r[j];
            const double source = (4.0 - 4.0 * r * r + 1.0) * v[j];  // -Delta v + v
            worst = std::max(worst, std::abs(lap[j] + v[j] - source));
        }
        return worst;
    };
    const double e1 = resid_at(4096), e2 = resid_at(8192);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 > 3.0);
}

TEST_CASE("decay fit: synthetic exponential tail") {
    auto grid = make_grid(20.0, 2048);
    std::vector<double> v(grid->n);
    for (int j = 0; j < grid->n; ++j)
        v[j] = std::exp(-3.0 * grid->r[j]) / std::sqrt(grid->r[j]);
    CHECK(std::abs(fit_decay(v, *grid) - 3.0) < 1e-6);
}

TEST_CASE("decay fit: omega=1 and omega=4 rates") {
    for (double omega : {1.0, 4.0}) {
        ModelParams p{omega, 0};
        auto grid = make_grid(30.0 / std::sqrt(omega), 8192);
        ProfileSolution sol = shoot_profile(p, grid);
        CHECK(std::abs(sol.decay_rate_fit - std::sqrt(omega)) < 0.02 * std::sqrt(omega));
    }
}

TEST_CASE("profile: all four parameter cases converge") {
    for (double omega : {1.0, 2.0}) {
        for (int mu : {0, 1}) {
            ModelParams p{omega, mu};
            auto grid = make_grid(20.0 / std::sqrt(omega), 4096);
            ProfileSolution sol = shoot_profile(p, grid);
            std::printf("[measure] w=%g mu=%d: amp=%.10g grad=%.10g mass=%.10g r42=%.3e\n",
                        omega, mu, sol.amplitude, sol.grad_norm_sq, sol.mass,
                        sol.pohozaev_42_residual);
            CHECK(sol.grad_norm_sq > 0.0);
            CHECK(sol.grad_norm_sq < 1.0);
            CHECK(sol.equation_residual < 1e-9);
            CHECK(sol.pohozaev_45_residual < 1e-10);
        }
    }
}

TEST_CASE("frequency-scaling assignment: stretched profile solves the unit-frequency form") {
    // Q(y) = phi_omega(y / sqrt(omega)) satisfies -Delta Q + Q = f_mu(Q)/omega;
    // on the stretched grid the node values coincide with phi's
    const double omega = 4.0;
    ModelParams p{omega, 0};
    auto grid = make_grid(24.0 / std::sqrt(omega), 4096);
    ProfileSolution sol = shoot_profile(p, grid);
    auto stretched = make_grid(grid->r_max * std::sqrt(omega), grid->n);
    std::vector<double> q = sol.field.values;
    std::vector<double> lap(grid->n);
    radial_laplacian_apply(std::span<const double>(q), 0, *stretched, lap);
    double worst = 0.0;
    for (int j = 0; j < grid->n; ++j)
        worst = std::max(worst, std::abs(lap[j] + q[j] - f_mu(q[j], p) / omega));
    CHECK(worst < 1e-5);
    // mass(phi_omega) = mass(Q_omega)/omega, exact under the discrete measure
    const double mass_phi = integrate(std::vector<double>(grid->n, 0.0), *grid) +
                            [&] {
                                std::vector<double> sq(grid->n);
                                for (int j = 0; j < grid->n; ++j) sq[j] = q[j] * q[j];
                                return integrate(sq, *grid);
                            }();
    const double mass_q = [&] {
        std::vector<double> sq(grid->n);
        for (int j = 0; j < grid->n; ++j) sq[j] = q[j] * q[j];
        return integrate(sq, *stretched);
    }();
    CHECK(mass_phi == doctest::Approx(mass_q / omega).epsilon(1e-12));
}

TEST_CASE("rescale: identity, mass invariance, gradient scaling, K-set slide") {
    ModelParams p{1.0, 0};
    auto grid = make_grid(20.0, 8192);
    ProfileSolution sol = shoot_profile(p, grid);

    RadialField same = rescale(sol, 1.0);
    double dev = 0.0;
    for (int j = 0; j < grid->n; ++j)
        dev = std::max(dev, std::abs(same.values[j] - sol.field.values[j]));
    CHECK(dev < 1e-9);

    RadialField up = rescale(sol, 1.05);
    const double m0 = sol.mass;
    const FunctionalReport rep =
        functionals(std::span<const double>(up.values), *grid, p, sol.action);
    CHECK(std::abs(rep.mass - m0) < 1e-6 * m0);
    const double g0 = sol.grad_norm_sq;
    const double g1 = grad_norm_sq(std::span<const double>(up.values), *grid);
    CHECK(std::abs(g1 - 1.1025 * g0) < 1e-6 * g0);
    // the lemma window: E > 0, I < 0, S < S(phi)
    CHECK(rep.energy > 0.0);
    CHECK(rep.virial_i < 0.0);
    CHECK(rep.action < sol.action);
    CHECK(rep.kset == KSet::KMinus);
}

TEST_CASE("profile: virial of the soliton vanishes") {
    ModelParams p{1.0, 1};
    ProfileSolution sol = shoot_profile(p, make_grid(20.0, 8192));
    const FunctionalReport rep =
        functionals(std::span<const double>(sol.field.values), *sol.field.grid, p);
    // same O(h^2) structure as the scaling identity; order-2 convergent
    CHECK(std::abs(rep.virial_i) < 2e-4 * sol.grad_norm_sq);
    CHECK(std::abs(rep.p_constraint) < 2e-4 * std::abs(rep.action));
}

TEST_CASE("shoot_profile error surface") {
    ModelParams p{1.0, 0};
    CHECK_THROWS_AS(shoot_profile(p, make_grid(10.0, 1024)), parameter_error);
    ShootConfig bad;
    bad.amp_lo = 1.5;  // both endpoints on the undershoot side
    bad.amp_hi = 2.5;
    CHECK_THROWS_AS(shoot_profile(p, make_grid(20.0, 1024), bad), bracket_error);
}

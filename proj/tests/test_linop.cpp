// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "expnls/errors.hpp"
#include "expnls/linop.hpp"
#include "expnls/spectral.hpp"

using namespace expnls;

namespace {
// one shared profile; construction is deterministic
const ProfileSolution& soliton() {
    static ProfileSolution sol = shoot_profile(ModelParams{1.0, 0}, make_grid(20.0, 4096));
    return sol;
}
}  // namespace

TEST_CASE("L_minus annihilates the profile") {
    const ProfileSolution& sol = soliton();
    SectorOperator lm(sol, Which::Minus, 0);
    const RadialGrid& g = lm.grid();
    std::vector<double> res = lm.apply(sol.field.values);
    CHECK(norm_w(res, g) < 1e-6 * norm_w(sol.field.values, g));
}

TEST_CASE("L_plus annihilates the radial derivative on l=1") {
    // the residual scales as O(h^2) through the profile's own discretization
    // error with constant ~60, so the 1e-4 target needs the finer grid
    ProfileSolution sol = shoot_profile(ModelParams{1.0, 0}, make_grid(25.0, 32768));
    SectorOperator lp(sol, Which::Plus, 1);
    const RadialGrid& g = lp.grid();
    std::vector<double> dphi = radial_derivative(sol.field.values, g);
    std::vector<double> res = lp.apply(dphi);
    CHECK(norm_w(res, g) < 1e-4 * norm_w(dphi, g));
}

TEST_CASE("zero potential: quadratic form bounded below by omega") {
    auto grid = make_grid(15.0, 1024);
    ModelParams p{1.3, 0};
    std::vector<double> pot(grid->n, p.omega);
    SectorOperator op(grid, p, Which::Minus, 0, pot);
    std::mt19937 rng(3);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> u(grid->n);
        for (auto& x : u) x = dist(rng);
        std::vector<double> au = op.apply(u);
        const double q = inner(au, u, *grid);
        const double m = inner(u, u, *grid);
        CHECK(q >= p.omega * m * (1.0 - 1e-12));
    }
}

TEST_CASE("apply: linearity, w-symmetry, stencil agreement") {
    const ProfileSolution& sol = soliton();
    const RadialGrid& g = *sol.field.grid;
    std::mt19937 rng(11);
    std::normal_distribution<double> dist;
    for (Which which : {Which::Plus, Which::Minus}) {
        for (int l : {0, 1, 3}) {
            SectorOperator op(sol, which, l);
            std::vector<double> u(g.n), v(g.n);
            for (int j = 0; j < g.n; ++j) {
                u[j] = dist(rng) * std::exp(-0.05 * g.r[j] * g.r[j]);
                v[j] = dist(rng) * std::exp(-0.05 * g.r[j] * g.r[j]);
            }
            // linearity
            std::vector<double> upv(g.n);
            for (int j = 0; j < g.n; ++j) upv[j] = 2.0 * u[j] - 3.0 * v[j];
            std::vector<double> a1 = op.apply(upv);
            std::vector<double> au = op.apply(u), av = op.apply(v);
            double lin = 0.0, scale = 0.0;
            for (int j = 0; j < g.n; ++j) {
                lin = std::max(lin, std::abs(a1[j] - 2.0 * au[j] + 3.0 * av[j]));
                scale = std::max(scale, std::abs(a1[j]));
            }
            CHECK(lin < 1e-12 * scale);
            // symmetry under the sector weights
            const std::vector<double>& sw = op.sym_weights();
            double sym_a = 0.0, sym_b = 0.0;
            for (int j = 0; j < g.n; ++j) {
                sym_a += sw[j] * au[j] * v[j];
                sym_b += sw[j] * u[j] * av[j];
            }
            CHECK(std::abs(sym_a - sym_b) <=
                  1e-10 * (std::abs(sym_a) + norm_w(u, g) * norm_w(v, g)));
            // independent stencil route: -Delta_l u + potential * u
            std::vector<double> lap(g.n);
            radial_laplacian_apply(std::span<const double>(u), l, g, lap);
            double worst = 0.0;
            for (int j = 0; j < g.n; ++j) {
                const double direct = lap[j] + op.potential_values()[j] * u[j];
                worst = std::max(worst, std::abs(direct - au[j]));
            }
            CHECK(worst < 1e-12 * scale);
        }
    }
}

TEST_CASE("solve: generalized kernel companion and round trip") {
    const ProfileSolution& sol = soliton();
    const RadialGrid& g = *sol.field.grid;
    // psi = L_{-,1}^{-1} phi' exists: the l=1 minus-sector is positive
    SectorOperator lm1(sol, Which::Minus, 1);
    std::vector<double> dphi = radial_derivative(sol.field.values, g);
    std::vector<double> psi = lm1.solve(dphi);
    std::vector<double> back = lm1.apply(psi);
    double dev = 0.0;
    for (int j = 0; j < g.n; ++j) dev += g.w[j] * (back[j] - dphi[j]) * (back[j] - dphi[j]);
    CHECK(std::sqrt(dev) < 1e-6 * norm_w(dphi, g));

    // L_{+,0} w = phi for the slope quantity; solve-then-apply round trip
    SectorOperator lp0(sol, Which::Plus, 0);
    std::vector<double> w = lp0.solve(sol.field.values);
    std::vector<double> round = lp0.apply(w);
    double dev2 = 0.0;
    for (int j = 0; j < g.n; ++j)
        dev2 += g.w[j] * (round[j] - sol.field.values[j]) * (round[j] - sol.field.values[j]);
    CHECK(std::sqrt(dev2) < 1e-10 * norm_w(sol.field.values, g));
}

TEST_CASE("solve with kernel guard: projected solve on the singular sector") {
    const ProfileSolution& sol = soliton();
    const RadialGrid& g = *sol.field.grid;
    SectorOperator lm0(sol, Which::Minus, 0);
    // kernel direction: the profile itself (normalized)
    std::vector<double> ker = sol.field.values;
    const double kn = norm_w(ker, g);
    for (double& x : ker) x /= kn;
    // rhs orthogonal to the kernel
    std::vector<double> rhs(g.n);
    for (int j = 0; j < g.n; ++j) rhs[j] = g.r[j] * std::exp(-g.r[j] * g.r[j]);
    const double c = inner(rhs, ker, g);
    for (int j = 0; j < g.n; ++j) rhs[j] -= c * ker[j];
    std::vector<double> x = lm0.solve(rhs, std::span<const double>(ker));
    // solution solves the equation in the complement
    std::vector<double> ax = lm0.apply(x);
    const double co = inner(ax, ker, g);
    for (int j = 0; j < g.n; ++j) ax[j] -= co * ker[j];
    double dev = 0.0;
    for (int j = 0; j < g.n; ++j) dev += g.w[j] * (ax[j] - rhs[j]) * (ax[j] - rhs[j]);
    CHECK(std::sqrt(dev) < 1e-8 * norm_w(rhs, g));
    CHECK(std::abs(inner(x, ker, g)) < 1e-10 * norm_w(x, g));
    // non-orthogonal rhs is rejected
    CHECK_THROWS_AS(lm0.solve(sol.field.values, std::span<const double>(ker)),
                    conditioning_error);
}

TEST_CASE("solve then apply returns a random well-conditioned rhs") {
    const ProfileSolution& sol = soliton();
    const RadialGrid& g = *sol.field.grid;
    SectorOperator lm1(sol, Which::Minus, 1);  // positive definite sector
    std::mt19937 rng(29);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> rhs(g.n);
        for (int j = 0; j < g.n; ++j) rhs[j] = dist(rng) * std::exp(-0.2 * g.r[j]);
        std::vector<double> x = lm1.solve(rhs);
        std::vector<double> back = lm1.apply(x);
        double dev = 0.0, scale = 0.0;
        for (int j = 0; j < g.n; ++j) {
            dev = std::max(dev, std::abs(back[j] - rhs[j]));
            scale = std::max(scale, std::abs(rhs[j]));
        }
        CHECK(dev < 1e-10 * scale);
    }
}

TEST_CASE("sector ordering: lowest eigenvalue increases with l") {
    const ProfileSolution& sol = soliton();
    double prev = -1e300;
    for (int l = 0; l <= 3; ++l) {
        SectorOperator lm(sol, Which::Minus, l);
        const double lam = eigenvalue_by_index(lm.sym_bands(), 0);
        CHECK(lam > prev);
        prev = lam;
    }
}

TEST_CASE("scaling identity: L_plus(r phi') = -2 Delta phi") {
    ProfileSolution sol = shoot_profile(ModelParams{1.0, 0}, make_grid(25.0, 32768));
    const RadialGrid& g = *sol.field.grid;
    SectorOperator lp0(sol, Which::Plus, 0);
    std::vector<double> dphi = radial_derivative(sol.field.values, g);
    std::vector<double> rdphi(g.n);
    for (int j = 0; j < g.n; ++j) rdphi[j] = g.r[j] * dphi[j];
    std::vector<double> lhs = lp0.apply(rdphi);
    std::vector<double> rhs(g.n), lap(g.n);
    radial_laplacian_apply(std::span<const double>(sol.field.values), 0, g, lap);
    for (int j = 0; j < g.n; ++j) rhs[j] = 2.0 * lap[j];  // -2 Delta phi
    double dev = 0.0;
    for (int j = 0; j < g.n; ++j) dev += g.w[j] * (lhs[j] - rhs[j]) * (lhs[j] - rhs[j]);
    CHECK(std::sqrt(dev) < 1e-4 * norm_w(rhs, g));
}

TEST_CASE("quadratic form of the profile matches the closed-form integral") {
    for (int mu : {0, 1}) {
        ProfileSolution sol = shoot_profile(ModelParams{1.0, mu}, make_grid(20.0, 4096));
        const RadialGrid& g = *sol.field.grid;
        SectorOperator lp0(sol, Which::Plus, 0);
        std::vector<double> lphi = lp0.apply(sol.field.values);
        std::vector<double> prod(g.n), closed(g.n);
        for (int j = 0; j < g.n; ++j) {
            const double u = sol.field.values[j];
            prod[j] = lphi[j] * u;
            closed[j] = -8.0 * std::numbers::pi *
                        (std::exp(4.0 * std::numbers::pi * u * u) - mu) * u * u * u * u;
        }
        const double form = integrate(prod, g);
        const double ref = integrate(closed, g);
        CHECK(form < 0.0);
        CHECK(std::abs(form - ref) < 1e-5 * std::abs(ref));
    }
}

TEST_CASE("sector operator rejects bad construction") {
    const ProfileSolution& sol = soliton();
    CHECK_THROWS_AS(SectorOperator(sol, Which::Plus, -1), parameter_error);
    CHECK_THROWS_AS(SectorOperator(sol.field.grid, ModelParams{1.0, 0}, Which::Plus, 0,
                                   std::vector<double>(7, 1.0)),
                    dimension_error);
}

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/linop.hpp"

#include <cmath>
#include <numbers>

#include "expnls/errors.hpp"

namespace expnls {

SectorOperator::SectorOperator(const ProfileSolution& sol, Which which, int l)
    : grid_(sol.field.grid), params_(sol.params), which_(which), l_(l) {
    if (l < 0) throw parameter_error("SectorOperator: sector index must be >= 0");
    const int n = grid_->n;
    potential_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double u = sol.field.values[j];
        const double v = (which == Which::Minus) ? g_fun(u * u, params_) : lplus_potential(u, params_);
        potential_[j] = params_.omega - v;
    }
    assemble();
}

SectorOperator::SectorOperator(std::shared_ptr<const RadialGrid> grid, ModelParams params,
                               Which which, int l, std::vector<double> potential)
    : grid_(std::move(grid)), params_(params), which_(which), l_(l),
      potential_(std::move(potential)) {
    if (l < 0) throw parameter_error("SectorOperator: sector index must be >= 0");
    if (static_cast<int>(potential_.size()) != grid_->n)
        throw dimension_error("SectorOperator: potential length mismatch");
    assemble();
}

void SectorOperator::assemble() {
    const RadialGrid& g = *grid_;
    const int n = g.n;
    std::vector<double> rho, cell;
    sector_flux_coefficients(g, l_, rho, cell);
    diag_.resize(n);
    upper_.assign(n - 1, 0.0);
    lower_.assign(n - 1, 0.0);
    sym_off_.assign(n - 1, 0.0);
    sym_w_.resize(n);
    const double inv_h = 1.0 / g.h;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < n; ++j) {
        const double flux_sum = (j == n - 1) ? (2.0 * rho[n] + rho[n - 1]) : (rho[j + 1] + rho[j]);
        diag_[j] = flux_sum * inv_h / cell[j] + potential_[j];
        sym_w_[j] = two_pi * cell[j] / std::pow(g.r[j], 2 * l_);
    }
    for (int i = 0; i + 1 < n; ++i) {
        const double ratio = (l_ == 0) ? 1.0 : std::pow(g.r[i] / g.r[i + 1], l_);
        upper_[i] = -(rho[i + 1] * inv_h / cell[i]) * ratio;
        lower_[i] = -(rho[i + 1] * inv_h / cell[i + 1]) / ratio;
        // similarity-symmetrized coupling: the geometric mean of the pair
        sym_off_[i] = -rho[i + 1] * inv_h / std::sqrt(cell[i] * cell[i + 1]);
    }
}

std::vector<double> SectorOperator::apply(std::span<const double> v) const {
    const int n = grid_->n;
    if (static_cast<int>(v.size()) != n) throw dimension_error("SectorOperator::apply: size mismatch");
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double s = diag_[j] * v[j];
        if (j > 0) s += lower_[j - 1] * v[j - 1];
        if (j + 1 < n) s += upper_[j] * v[j + 1];
        out[j] = s;
    }
    return out;
}

std::vector<double> SectorOperator::solve(std::span<const double> rhs,
                                          std::optional<std::span<const double>> kernel_guard) const {
    const RadialGrid& g = *grid_;
    const int n = g.n;
    if (static_cast<int>(rhs.size()) != n) throw dimension_error("SectorOperator::solve: size mismatch");
    Tridiag t{lower_, diag_, upper_};
    if (!kernel_guard) {
        return solve_tridiag(t, rhs);
    }
    std::span<const double> k = *kernel_guard;
    const double knorm2 = inner(k, k, g);
    if (!(knorm2 > 0.0)) throw parameter_error("SectorOperator::solve: zero kernel guard");
    const double rn = norm_w(rhs, g);
    const double overlap = inner(rhs, k, g);
    if (rn > 0.0 && std::abs(overlap) / (rn * std::sqrt(knorm2)) > 1e-8)
        throw conditioning_error(
            "SectorOperator::solve: rhs is not orthogonal to the kernel guard");
    std::vector<double> b(rhs.begin(), rhs.end());
    for (int j = 0; j < n; ++j) b[j] -= overlap / knorm2 * k[j];
    std::vector<double> x = solve_tridiag(t, b);
    // project the solution back to the complement and refine once
    auto project = [&](std::vector<double>& v) {
        const double c = inner(v, k, g) / knorm2;
        for (int j = 0; j < n; ++j) v[j] -= c * k[j];
    };
    project(x);
    std::vector<double> Ax = apply(x);
    std::vector<double> res(n);
    for (int j = 0; j < n; ++j) res[j] = b[j] - Ax[j];
    const double co = inner(res, k, g) / knorm2;
    for (int j = 0; j < n; ++j) res[j] -= co * k[j];
    std::vector<double> corr = solve_tridiag(t, res);
    for (int j = 0; j < n; ++j) x[j] += corr[j];
    project(x);
    return x;
}

SymTridiag SectorOperator::sym_bands() const { return SymTridiag{diag_, sym_off_}; }

Tridiag SectorOperator::bands() const { return Tridiag{lower_, diag_, upper_}; }

SectorOperator assemble(const ProfileSolution& sol, Which which, int l) {
    return SectorOperator(sol, which, l);
}

}  // namespace expnls

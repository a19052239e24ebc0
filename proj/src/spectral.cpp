// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "expnls/errors.hpp"

namespace expnls {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kKernelAlign = 0.999;

// eigenvector in grid variables: v = W^{-1/2} y with the operator's own
// symmetrization weights, then normalized against the grid pairing
std::vector<double> to_grid_vector(const std::vector<double>& y, const SectorOperator& op) {
    const RadialGrid& g = op.grid();
    const std::vector<double>& sw = op.sym_weights();
    std::vector<double> v(y.size());
    for (size_t j = 0; j < y.size(); ++j) v[j] = y[j] / std::sqrt(sw[j]);
    const double nrm = norm_w(v, g);
    for (double& x : v) x /= nrm;
    return v;
}

double alignment(std::span<const double> a, std::span<const double> b, const RadialGrid& g) {
    return std::abs(inner(a, b, g)) / (norm_w(a, g) * norm_w(b, g));
}

}  // namespace

std::vector<EigenPair> lowest_eigs(const SectorOperator& op, int k) {
    if (k < 1) throw parameter_error("lowest_eigs: k must be >= 1");
    const RadialGrid& g = op.grid();
    const SymTridiag bands = op.sym_bands();
    std::vector<EigenPair> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        EigenPair pair;
        pair.eigenvalue = eigenvalue_by_index(bands, i);
        pair.field = to_grid_vector(eigenvector(bands, pair.eigenvalue), op);
        std::vector<double> Av = op.apply(pair.field);
        for (int j = 0; j < g.n; ++j) Av[j] -= pair.eigenvalue * pair.field[j];
        pair.residual = norm_w(Av, g);
        if (!(pair.residual < 1e-8 * std::max(1.0, std::abs(pair.eigenvalue))))
            throw iteration_limit_error("lowest_eigs: eigenpair residual " +
                                        std::to_string(pair.residual) + " did not converge");
        out.push_back(std::move(pair));
    }
    return out;
}

int morse_index(const ProfileSolution& sol, Which which, int l_max) {
    if (l_max < 2) throw parameter_error("morse_index: l_max must be >= 2");
    const RadialGrid& g = *sol.field.grid;
    // The symmetry kernels of the discretization drift O(h^2) away from zero
    // (the grid carries no exact translation symmetry), so negative
    // eigenvalues in the two slots that own an analytic kernel direction are
    // classified by eigenfield alignment; eigenvectors of distinct
    // eigenvalues are orthogonal, so at most one can align.
    int total = 0;
    for (int l = 0; l <= l_max; ++l) {
        SectorOperator op(sol, which, l);
        const SymTridiag bands = op.sym_bands();
        const int below = sturm_count_below(bands, 0.0);
        int negatives = 0;
        for (int idx = 0; idx < below; ++idx) {
            bool is_kernel = false;
            if ((which == Which::Minus && l == 0) || (which == Which::Plus && l == 1)) {
                const double lambda = eigenvalue_by_index(bands, idx);
                std::vector<double> v = to_grid_vector(eigenvector(bands, lambda), op);
                const std::vector<double> dir = (which == Which::Minus)
                                                    ? sol.field.values
                                                    : radial_derivative(sol.field.values, g);
                is_kernel = alignment(v, dir, g) > kKernelAlign;
            }
            if (!is_kernel) ++negatives;
        }
        total += (l == 0 ? 1 : 2) * negatives;
        const double lowest = eigenvalue_by_index(bands, 0);
        if (lowest > 0.25 * sol.params.omega)
            return total;  // sector ordering: higher sectors positive
        if (l == l_max && negatives > 0)
            throw inconclusive_error("morse_index: sector cutoff l_max=" + std::to_string(l_max) +
                                     " still carries negative directions");
    }
    return total;
}

double vk_slope(const ProfileSolution& sol) {
    const RadialGrid& g = *sol.field.grid;
    SectorOperator op(sol, Which::Plus, 0);
    const SymTridiag bands = op.sym_bands();
    // nearest-to-zero eigenvalue of the l=0 sector must stay away from zero
    const int below = sturm_count_below(bands, 0.0);
    double nearest = std::numeric_limits<double>::infinity();
    if (below > 0) nearest = std::min(nearest, std::abs(eigenvalue_by_index(bands, below - 1)));
    if (below < g.n) nearest = std::min(nearest, std::abs(eigenvalue_by_index(bands, below)));
    if (!(nearest > 1e-6 * sol.params.omega))
        throw conditioning_error("vk_slope: l=0 sector nearly singular, |lambda_min|=" +
                                 std::to_string(nearest));
    std::vector<double> w = op.solve(sol.field.values);
    return inner(w, sol.field.values, g);
}

PsiWitness psi_witness(const ProfileSolution& sol) {
    const RadialGrid& g = *sol.field.grid;
    std::span<const double> phi(sol.field.values);
    PsiWitness res;
    res.psi = dilation_apply(phi, g);
    res.psi_orth_residual =
        std::abs(inner(res.psi, phi, g)) / (norm_w(res.psi, g) * norm_w(phi, g));
    SectorOperator op(sol, Which::Plus, 0);
    const std::vector<double> Lpsi = op.apply(res.psi);
    res.psi_form = inner(Lpsi, res.psi, g);
    // same number via the pointwise identity 4 u f - 8 F - 2 g'(u^2) u^4,
    // whose mu-dependence cancels; the integrand factors as e^{4 pi z} chi(z),
    // which keeps the sign exact in the tail
    std::vector<double> integrand(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double z = phi[j] * phi[j];
        integrand[j] = std::exp(4.0 * kPi * z) * chi_187(z);
    }
    res.closed_form_value = -integrate(integrand, g);
    return res;
}

SpectralReport spectral_report(const ProfileSolution& sol) {
    SpectralReport rep;
    rep.omega = sol.params.omega;
    rep.mu = sol.params.mu;
    rep.morse_minus = morse_index(sol, Which::Minus);
    rep.morse_plus = morse_index(sol, Which::Plus);
    {
        SectorOperator lm0(sol, Which::Minus, 0);
        rep.lminus_ground_eig = eigenvalue_by_index(lm0.sym_bands(), 0);
    }
    {
        SectorOperator lp1(sol, Which::Plus, 1);
        rep.lplus_kernel_eig_l1 = eigenvalue_by_index(lp1.sym_bands(), 0);
        SectorOperator lp0(sol, Which::Plus, 0);
        rep.lplus_lowest_eig_l0 = eigenvalue_by_index(lp0.sym_bands(), 0);
    }
    rep.vk_slope = vk_slope(sol);
    const PsiWitness w = psi_witness(sol);
    rep.psi_form = w.psi_form;
    rep.psi_orth_residual = w.psi_orth_residual;
    return rep;
}

KreinCount krein_count(const SpectralReport& report) {
    if (report.morse_minus != 0)
        throw verdict_error("krein_count: nonzero Morse index in the phase-symmetry slot");
    KreinCount out;
    out.n_L = report.morse_plus + report.morse_minus;
    out.n_D = (report.vk_slope < 0.0) ? 1 : 0;
    const int diff = out.n_L - out.n_D;
    if (diff <= 0) {
        out.k_r = 0;
        out.verdict = StabilityVerdict::SpectrallyStable;
    } else if (diff == 1) {
        // parity forces the complex and marginal counts to vanish
        out.k_r = 1;
        out.verdict = StabilityVerdict::UnstableSingleRealMode;
    } else {
        throw verdict_error("krein_count: index difference " + std::to_string(diff) +
                            " does not determine a single real mode");
    }
    return out;
}

}  // namespace expnls

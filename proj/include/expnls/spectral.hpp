// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "expnls/linop.hpp"

namespace expnls {

struct EigenPair {
    double eigenvalue = 0.0;
    std::vector<double> field;  // grid-normalized: inner(field, field) = 1
    double residual = 0.0;      // |A v - lambda v|_w
};

// k smallest eigenpairs of a sector operator (Sturm bisection plus inverse
// iteration on the symmetrized tridiagonal).
std::vector<EigenPair> lowest_eigs(const SectorOperator& op, int k);

// Eigenvalues within kernel_tol = 1e-5 * omega of zero count as kernel only
// when the eigenfield aligns (> 0.999) with the known symmetry direction;
// everything negative otherwise counts toward the index.
int morse_index(const ProfileSolution& sol, Which which, int l_max = 6);

// <L_+^{-1} phi, phi>: the slope quantity of the stability criterion.
// Errors out if the l=0 sector of L_+ is nearly singular instead of
// projecting silently.
double vk_slope(const ProfileSolution& sol);

struct PsiWitness {
    double psi_form = 0.0;           // <L_+ Psi, Psi>, direct quadrature
    double psi_orth_residual = 0.0;  // |<Psi, phi>| / (|Psi| |phi|)
    double closed_form_value = 0.0;  // -int [e^{4 pi phi^2}(8 pi phi^4 + 1/pi - 4 phi^2) - 1/pi]
    std::vector<double> psi;         // r phi' + phi on the l=0 sector
};

// The explicit negative direction Psi = r phi' + phi, orthogonal to phi.
PsiWitness psi_witness(const ProfileSolution& sol);

struct SpectralReport {
    double omega = 0.0;
    int mu = 0;
    int morse_plus = 0;
    int morse_minus = 0;
    double lminus_ground_eig = 0.0;
    double lplus_kernel_eig_l1 = 0.0;
    double lplus_lowest_eig_l0 = 0.0;
    double vk_slope = 0.0;
    double psi_form = 0.0;
    double psi_orth_residual = 0.0;
};

SpectralReport spectral_report(const ProfileSolution& sol);

enum class StabilityVerdict { UnstableSingleRealMode, SpectrallyStable };

struct KreinCount {
    int n_L = 0;   // negative directions of the energy operator
    int n_D = 0;   // negative directions of the constraint matrix
    int k_r = 0;   // predicted real growing modes
    StabilityVerdict verdict = StabilityVerdict::SpectrallyStable;
};

// Index bookkeeping k_r + 2 k_c + 2 k_0 = n(L) - n(D) with n(D) read off the
// sign of the slope; a count of one forces a single real mode by parity.
KreinCount krein_count(const SpectralReport& report);

}  // namespace expnls

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace expnls {

// Symmetric tridiagonal matrix: diag.size() = n, off.size() = n-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;
};

// Number of eigenvalues strictly below sigma (Sturm sequence / LDL^T inertia).
int sturm_count_below(const SymTridiag& t, double sigma);

// k-th smallest eigenvalue (k = 0-based) by bisection.
double eigenvalue_by_index(const SymTridiag& t, int k);

std::vector<double> lowest_eigenvalues(const SymTridiag& t, int k);

// Eigenvector by inverse iteration at a converged eigenvalue estimate;
// returned with unit Euclidean norm.
std::vector<double> eigenvector(const SymTridiag& t, double lambda);

// General (possibly nonsymmetric) tridiagonal system, solved with partial
// pivoting.  lower/upper have size n-1.
struct Tridiag {
    std::vector<double> lower, diag, upper;
};
std::vector<double> solve_tridiag(const Tridiag& t, std::span<const double> rhs);

// Complex tridiagonal Thomas solve without pivoting; intended for strictly
// diagonally dominant systems such as I + i*theta*(-Delta).
void solve_tridiag_dominant(std::span<const std::complex<double>> lower,
                            std::span<const std::complex<double>> diag,
                            std::span<const std::complex<double>> upper,
                            std::span<std::complex<double>> rhs_to_solution);

// Banded LU with partial pivoting for bandwidths (kl, ku); used for the
// pentadiagonal composed operator of the growing-mode solve.
class BandLU {
  public:
    BandLU(int n, int kl, int ku, const std::function<double(int, int)>& entry);
    std::vector<double> solve(std::span<const double> rhs) const;
    int size() const { return n_; }

  private:
    int n_, kl_, ku_;
    std::vector<double> ab_;  // (2*kl + ku + 1) x n, LAPACK-style band storage
    std::vector<int> piv_;
    double& at(int band_row, int col) { return ab_[static_cast<size_t>(col) * ld_ + band_row]; }
    const double& at(int band_row, int col) const {
        return ab_[static_cast<size_t>(col) * ld_ + band_row];
    }
    int ld_ = 0;
};

}  // namespace expnls

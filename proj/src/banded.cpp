// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expnls/errors.hpp"

namespace expnls {

// LDL^T inertia count: the number of negative pivots of T - sigma I equals
// the number of eigenvalues below sigma.
int sturm_count_below(const SymTridiag& t, double sigma) {
    const int n = static_cast<int>(t.diag.size());
    int count = 0;
    double d = t.diag[0] - sigma;
    if (d < 0.0) ++count;
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 1; i < n; ++i) {
        double denom = d;
        if (std::abs(denom) < tiny) denom = (denom < 0.0) ? -tiny : tiny;
        d = (t.diag[i] - sigma) - t.off[i - 1] * t.off[i - 1] / denom;
        if (d < 0.0) ++count;
    }
    return count;
}

namespace {

std::pair<double, double> gershgorin_bounds(const SymTridiag& t) {
    const int n = static_cast<int>(t.diag.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(t.off[i - 1]);
        if (i + 1 < n) radius += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    return {lo, hi};
}

}  // namespace

double eigenvalue_by_index(const SymTridiag& t, int k) {
    const int n = static_cast<int>(t.diag.size());
    if (k < 0 || k >= n) throw parameter_error("eigenvalue_by_index: index out of range");
    auto [lo, hi] = gershgorin_bounds(t);
    // bisection to floating-point resolution: invariant count(lo) <= k < count(hi)
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count_below(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> lowest_eigenvalues(const SymTridiag& t, int k) {
    const int n = static_cast<int>(t.diag.size());
    k = std::min(k, n);
    std::vector<double> ev(k);
    for (int i = 0; i < k; ++i) ev[i] = eigenvalue_by_index(t, i);
    return ev;
}

std::vector<double> eigenvector(const SymTridiag& t, double lambda) {
    const int n = static_cast<int>(t.diag.size());
    // inverse iteration on (T - lambda I) with partially pivoted LU
    Tridiag shifted{std::vector<double>(t.off), std::vector<double>(t.diag),
                    std::vector<double>(t.off)};
    for (int i = 0; i < n; ++i) shifted.diag[i] -= lambda;

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int i = 0; i < n; ++i) v[i] *= (i % 3 == 1) ? 1.13 : ((i % 7 == 3) ? 0.91 : 1.0);
    double prev_norm = 0.0;
    for (int it = 0; it < 8; ++it) {
        std::vector<double> y = solve_tridiag(shifted, v);
        double norm = 0.0;
        for (double x : y) norm += x * x;
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm)) break;
        for (int i = 0; i < n; ++i) v[i] = y[i] / norm;
        // growth factor ~ 1/dist(lambda, spectrum): stop once it saturates
        if (it > 0 && std::abs(norm - prev_norm) <= 1e-8 * norm) break;
        prev_norm = norm;
    }
    return v;
}

// Tridiagonal LU with partial pivoting; pivoting introduces a second
// superdiagonal (fill), so the factored form is (D, U1, U2).
std::vector<double> solve_tridiag(const Tridiag& t, std::span<const double> rhs) {
    const int n = static_cast<int>(t.diag.size());
    if (static_cast<int>(rhs.size()) != n) throw dimension_error("solve_tridiag: size mismatch");
    std::vector<double> D(t.diag.begin(), t.diag.end());
    std::vector<double> U1(n > 1 ? n - 1 : 0, 0.0), U2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<double> B(rhs.begin(), rhs.end());
    for (int i = 0; i + 1 < n; ++i) U1[i] = t.upper[i];
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i + 1 < n; ++i) {
        double a0 = D[i], a1 = U1[i], a2 = 0.0;
        double b0 = t.lower[i], b1 = D[i + 1];
        double b2 = (i + 2 < n) ? U1[i + 1] : 0.0;
        if (std::abs(b0) > std::abs(a0)) {
            std::swap(a0, b0);
            std::swap(a1, b1);
            std::swap(a2, b2);
            std::swap(B[i], B[i + 1]);
        }
        if (a0 == 0.0) a0 = tiny;
        const double m = b0 / a0;
        b1 -= m * a1;
        b2 -= m * a2;
        B[i + 1] -= m * B[i];
        D[i] = a0;
        U1[i] = a1;
        if (i + 2 < n) U2[i] = a2;
        D[i + 1] = b1;
        if (i + 2 < n) U1[i + 1] = b2;
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = B[i];
        if (i + 1 < n) s -= U1[i] * x[i + 1];
        if (i + 2 < n) s -= U2[i] * x[i + 2];
        double pivot = D[i];
        if (pivot == 0.0) pivot = tiny;
        x[i] = s / pivot;
    }
    return x;
}

void solve_tridiag_dominant(std::span<const std::complex<double>> lower,
                            std::span<const std::complex<double>> diag,
                            std::span<const std::complex<double>> upper,
                            std::span<std::complex<double>> b) {
    const int n = static_cast<int>(diag.size());
    std::vector<std::complex<double>> c(n - 1), d(n);
    d[0] = diag[0];
    c[0] = upper[0] / d[0];
    b[0] /= d[0];
    for (int i = 1; i < n; ++i) {
        d[i] = diag[i] - lower[i - 1] * c[i - 1];
        if (i < n - 1) c[i] = upper[i] / d[i];
        b[i] = (b[i] - lower[i - 1] * b[i - 1]) / d[i];
    }
    for (int i = n - 2; i >= 0; --i) b[i] -= c[i] * b[i + 1];
}

BandLU::BandLU(int n, int kl, int ku, const std::function<double(int, int)>& entry)
    : n_(n), kl_(kl), ku_(ku) {
    // LAPACK-style storage with kl extra rows for pivoting fill
    ld_ = 2 * kl + ku + 1;
    ab_.assign(static_cast<size_t>(ld_) * n, 0.0);
    piv_.resize(n);
    const int kv = kl + ku;  // row offset of the diagonal
    for (int j = 0; j < n; ++j)
        for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i)
            at(kv + i - j, j) = entry(i, j);
    // factorization
    for (int j = 0; j < n; ++j) {
        const int km = std::min(kl, n - 1 - j);
        int ip = 0;
        double pmax = std::abs(at(kv, j));
        for (int k = 1; k <= km; ++k) {
            const double a = std::abs(at(kv + k, j));
            if (a > pmax) {
                pmax = a;
                ip = k;
            }
        }
        piv_[j] = j + ip;
        if (pmax == 0.0) {
            at(kv, j) = std::numeric_limits<double>::min();
            continue;
        }
        const int ju = std::min(n - 1, j + ku + kl);  // columns touched by the pivot row
        if (ip != 0)
            for (int c = j; c <= ju; ++c) std::swap(at(kv + ip + j - c, c), at(kv + j - c, c));
        for (int k = 1; k <= km; ++k) {
            const double mult = at(kv + k, j) / at(kv, j);
            at(kv + k, j) = mult;
            for (int c = j + 1; c <= ju; ++c)
                at(kv + k + j - c, c) -= mult * at(kv + j - c, c);
        }
    }
}

std::vector<double> BandLU::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_) throw dimension_error("BandLU::solve: size mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
        if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
        const int km = std::min(kl_, n_ - 1 - j);
        for (int k = 1; k <= km; ++k) x[j + k] -= at(kv + k, j) * x[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
        const int top = std::max(0, j - kv);
        x[j] /= at(kv, j);
        for (int i = top; i < j; ++i) x[i] -= at(kv + i - j, j) * x[j];
    }
    return x;
}

}  // namespace expnls

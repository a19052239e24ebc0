// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "expnls/errors.hpp"

namespace expnls {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_size(size_t got, const RadialGrid& g, const char* where) {
    if (static_cast<int>(got) != g.n)
        throw dimension_error(std::string(where) + ": field length " + std::to_string(got) +
                              " does not match grid n=" + std::to_string(g.n));
}
}  // namespace

std::shared_ptr<const RadialGrid> make_grid(double r_max, int n) {
    if (!(r_max > 0.0)) throw parameter_error("make_grid: r_max must be positive");
    if (n < 16) throw parameter_error("make_grid: need at least 16 nodes");
    auto g = std::make_shared<RadialGrid>();
    g->r_max = r_max;
    g->n = n;
    g->h = r_max / n;
    g->r.resize(n);
    g->w.resize(n);
    for (int j = 0; j < n; ++j) {
        g->r[j] = (j + 0.5) * g->h;
        g->w[j] = kTwoPi * g->r[j] * g->h;
    }
    return g;
}

// Midpoint sum plus the O(h^2) Euler-Maclaurin endpoint correction
//   int G - h sum G(r_j) = (h^2/24) [G'(r_max) - G'(0)],  G(r) = 2 pi r v(r).
// G(0) = 0 is known exactly, so the left derivative comes from a quadratic
// through (0,0) and the first two nodes; the right derivative from the last
// three nodes.  Exact for v = const and v = r; O(h^4) for smooth v.
double integrate(std::span<const double> v, const RadialGrid& g) {
    check_size(v.size(), g, "integrate");
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * v[j];
    if (g.n >= 4) {
        const double G0 = kTwoPi * g.r[0] * v[0];
        const double G1 = kTwoPi * g.r[1] * v[1];
        const double gp_left = (9.0 * G0 - G1) / (3.0 * g.h);
        const int n = g.n;
        const double Ga = kTwoPi * g.r[n - 3] * v[n - 3];
        const double Gb = kTwoPi * g.r[n - 2] * v[n - 2];
        const double Gc = kTwoPi * g.r[n - 1] * v[n - 1];
        const double gp_right = (Ga - 3.0 * Gb + 2.0 * Gc) / g.h;
        s += (g.h * g.h / 24.0) * (gp_right - gp_left);
    }
    return s;
}

double inner(std::span<const double> a, std::span<const double> b, const RadialGrid& g) {
    check_size(a.size(), g, "inner");
    check_size(b.size(), g, "inner");
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * a[j] * b[j];
    return s;
}

double norm_w(std::span<const double> a, const RadialGrid& g) {
    return std::sqrt(inner(a, a, g));
}

double norm_w(std::span<const Complex> a, const RadialGrid& g) {
    check_size(a.size(), g, "norm_w");
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * std::norm(a[j]);
    return std::sqrt(s);
}

// Conservative flux form of -Delta_l on the half-offset mesh, built on the
// substitution u = r^l v: -Delta_l u = -r^l (r^{-(2l+1)}) (r^{2l+1} v')'.
// Fluxes r^{2l+1} v' live on the faces r = i h (the r=0 face carries none,
// which encodes the regular behavior u ~ r^l), cells divide by the exact
// integral of r^{2l+1}, and the Dirichlet face at r_max reflects oddly.
// Second-order accurate up to and including the first node; for l = 0 it is
// the plain finite-volume star.
void sector_flux_coefficients(const RadialGrid& g, int l, std::vector<double>& rho,
                              std::vector<double>& cell) {
    const int n = g.n;
    const int p = 2 * l + 1;
    rho.resize(n + 1);
    cell.resize(n);
    for (int i = 0; i <= n; ++i) rho[i] = std::pow(i * g.h, p);
    for (int j = 0; j < n; ++j) {
        const double a = std::pow(j * g.h, p + 1);
        const double b = std::pow((j + 1) * g.h, p + 1);
        cell[j] = (b - a) / (p + 1);
    }
}

template <typename T>
static void laplacian_impl(std::span<const T> u, int l, const RadialGrid& g, std::span<T> out) {
    const int n = g.n;
    std::vector<double> rho, cell;
    sector_flux_coefficients(g, l, rho, cell);
    std::vector<T> v(n);
    if (l == 0) {
        std::copy(u.begin(), u.end(), v.begin());
    } else {
        for (int j = 0; j < n; ++j) v[j] = u[j] / std::pow(g.r[j], l);
    }
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < n; ++j) {
        T flux_lo = (j == 0) ? T{} : T{rho[j] * (v[j] - v[j - 1]) * inv_h};
        T flux_hi = (j == n - 1) ? T{rho[n] * (-2.0 * v[n - 1]) * inv_h}
                                 : T{rho[j + 1] * (v[j + 1] - v[j]) * inv_h};
        out[j] = -(flux_hi - flux_lo) / cell[j];
        if (l != 0) out[j] *= std::pow(g.r[j], l);
    }
}

void radial_laplacian_apply(std::span<const double> u, int l, const RadialGrid& g,
                            std::span<double> out) {
    check_size(u.size(), g, "radial_laplacian_apply");
    check_size(out.size(), g, "radial_laplacian_apply");
    if (l < 0) throw parameter_error("radial_laplacian_apply: sector index must be >= 0");
    laplacian_impl<double>(u, l, g, out);
}

void radial_laplacian_apply(std::span<const Complex> u, int l, const RadialGrid& g,
                            std::span<Complex> out) {
    check_size(u.size(), g, "radial_laplacian_apply");
    check_size(out.size(), g, "radial_laplacian_apply");
    if (l < 0) throw parameter_error("radial_laplacian_apply: sector index must be >= 0");
    laplacian_impl<Complex>(u, l, g, out);
}

std::vector<double> radial_laplacian(std::span<const double> u, int l, const RadialGrid& g) {
    std::vector<double> out(u.size());
    radial_laplacian_apply(u, l, g, out);
    return out;
}

// Face quadrature paired with the flux stencil: with these weights
// grad_norm_sq(u) = inner(-Delta_0 u, u) identically (summation by parts).
template <typename T>
static double grad_impl(std::span<const T> u, const RadialGrid& g) {
    const int n = g.n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
        const double d = std::abs(u[i] - u[i - 1]);
        s += kTwoPi * i * d * d;
    }
    s += 2.0 * kTwoPi * n * std::norm(Complex(u[n - 1]));
    return s;
}

double grad_norm_sq(std::span<const double> u, const RadialGrid& g) {
    check_size(u.size(), g, "grad_norm_sq");
    const int n = g.n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
        const double d = u[i] - u[i - 1];
        s += kTwoPi * i * d * d;
    }
    s += 2.0 * kTwoPi * n * u[n - 1] * u[n - 1];
    return s;
}

double grad_norm_sq(std::span<const Complex> u, const RadialGrid& g) {
    check_size(u.size(), g, "grad_norm_sq");
    const int n = g.n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) s += kTwoPi * i * std::norm(u[i] - u[i - 1]);
    s += 2.0 * kTwoPi * n * std::norm(u[n - 1]);
    return s;
}

// Five-point fourth-order derivative; even reflection across r=0 and odd
// reflection past r_max.  The high order keeps the differencing error from
// dominating when an operator with 1/h^2 entries is applied afterwards.
std::vector<double> radial_derivative(std::span<const double> u, const RadialGrid& g) {
    check_size(u.size(), g, "radial_derivative");
    const int n = g.n;
    auto value = [&](int k) -> double {
        if (k < 0) return u[-k - 1];
        if (k >= n) {
            const int m = 2 * n - 1 - k;
            return (m >= 0) ? -u[m] : 0.0;
        }
        return u[k];
    };
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * g.h);
    for (int j = 0; j < n; ++j)
        d[j] = c * (value(j - 2) - 8.0 * value(j - 1) + 8.0 * value(j + 1) - value(j + 2));
    return d;
}

// Rows of the dilation generator.  Interior rows use
//   p_j = (r_j/h + 1)/2,  q_j = (r_j/h - 1)/2,
// which satisfy w_j p_j = w_{j+1} q_{j+1} exactly, so W D is antisymmetric.
// The first row cannot reach a ghost node; it couples to nodes 1 and 2 with
// weights fixed by consistency for even fields, and rows 1, 2 absorb the
// antisymmetric counterparts.  Row sums are 1 throughout (D const = const).
std::vector<double> dilation_apply(std::span<const double> u, const RadialGrid& g) {
    check_size(u.size(), g, "dilation_apply");
    const int n = g.n;
    if (n < 8) throw parameter_error("dilation_apply: grid too small");
    std::vector<double> out(n);

    const double d01 = 11.0 / 8.0, d02 = -3.0 / 8.0;
    out[0] = d01 * u[1] + d02 * u[2];

    // row 1: lower entry forced by antisymmetry against d01
    const double d10 = -(g.w[0] / g.w[1]) * d01;
    const double d12 = 1.0 - d10;
    out[1] = d10 * u[0] + d12 * u[2];

    // row 2: lower entries forced against d02 and d12
    const double d20 = -(g.w[0] / g.w[2]) * d02;
    const double d21 = -(g.w[1] / g.w[2]) * d12;
    const double d23 = 1.0 - d20 - d21;
    out[2] = d20 * u[0] + d21 * u[1] + d23 * u[3];

    double prev_up = d23;
    for (int j = 3; j < n - 1; ++j) {
        const double lo = -(g.w[j - 1] / g.w[j]) * prev_up;
        const double up = 1.0 - lo;
        out[j] = lo * u[j - 1] + up * u[j + 1];
        prev_up = up;
    }

    // last row: the would-be coupling past r_max folds with the odd ghost,
    // leaving a diagonal entry that acts on an exponentially small tail
    const double lo = -(g.w[n - 2] / g.w[n - 1]) * prev_up;
    const double up = 1.0 - lo;
    out[n - 1] = lo * u[n - 2] - up * u[n - 1];
    return out;
}

double interp_cubic(std::span<const double> u, const RadialGrid& g, double x) {
    check_size(u.size(), g, "interp_cubic");
    if (x < 0.0) x = -x;
    if (x >= g.r_max + 0.5 * g.h) return 0.0;
    const int n = g.n;
    // nodes k = -2..n+1 via reflection: even at 0, odd at r_max
    auto value = [&](int k) -> double {
        if (k < 0) k = -k - 1;
        if (k >= n) {
            const int m = 2 * n - 1 - k;
            return (m >= 0) ? -u[m] : 0.0;
        }
        return u[k];
    };
    auto node = [&](int k) -> double { return (k + 0.5) * g.h; };
    int j = static_cast<int>(std::floor(x / g.h - 0.5));
    j = std::clamp(j, -1, n - 1);
    double result = 0.0;
    for (int a = j - 1; a <= j + 2; ++a) {
        double w = 1.0;
        for (int b = j - 1; b <= j + 2; ++b) {
            if (b == a) continue;
            w *= (x - node(b)) / (node(a) - node(b));
        }
        result += w * value(a);
    }
    return result;
}

double second_moment(std::span<const double> u, const RadialGrid& g) {
    check_size(u.size(), g, "second_moment");
    std::vector<double> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = g.r[j] * g.r[j] * u[j] * u[j];
    return integrate(v, g);
}

double second_moment(std::span<const Complex> u, const RadialGrid& g) {
    check_size(u.size(), g, "second_moment");
    std::vector<double> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = g.r[j] * g.r[j] * std::norm(u[j]);
    return integrate(v, g);
}

}  // namespace expnls

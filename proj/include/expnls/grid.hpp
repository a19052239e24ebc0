// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace expnls {

using Complex = std::complex<double>;

// Uniform half-offset radial mesh on (0, r_max]: nodes r_j = (j+1/2)h with
// h = r_max/n.  The weights w_j = 2*pi*r_j*h embed the two-dimensional
// measure 2*pi*r*dr; they sum to pi*r_max^2 exactly.  The half offset keeps
// 1/r finite at every node.
struct RadialGrid {
    double r_max = 0.0;
    int n = 0;
    double h = 0.0;
    std::vector<double> r;
    std::vector<double> w;
};

std::shared_ptr<const RadialGrid> make_grid(double r_max, int n);

struct RadialField {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;
};

struct ComplexField {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<Complex> values;
};

// Quadrature of a pointwise-sampled integrand against 2*pi*r*dr.  Midpoint
// weights plus an O(h^2) endpoint-derivative correction; exact for constants
// and for r (the correction vanishes for linear r*v).  Smooth integrands
// integrate at O(h^4).
double integrate(std::span<const double> values, const RadialGrid& g);

// Plain discrete pairing sum_j w_j a_j b_j.  This is the inner product under
// which the sector operators are exactly symmetric; orthogonality statements
// and eigen-solves all use it.
double inner(std::span<const double> a, std::span<const double> b, const RadialGrid& g);
double norm_w(std::span<const double> a, const RadialGrid& g);
double norm_w(std::span<const Complex> a, const RadialGrid& g);

// Applies -Delta_l = -d_rr - (1/r) d_r + l^2/r^2 in conservative flux form,
// regularized through the substitution u = r^l v so the origin node stays
// second-order.  The r=0 face flux vanishes identically; Dirichlet value 0 is
// imposed at r = r_max by odd reflection.
void radial_laplacian_apply(std::span<const double> u, int l, const RadialGrid& g,
                            std::span<double> out);

// Face coefficients rho_i = (i h)^{2l+1} and exact cell integrals of
// r^{2l+1}; the building blocks of the sector stencil, shared with the
// operator assembly.
void sector_flux_coefficients(const RadialGrid& g, int l, std::vector<double>& rho,
                              std::vector<double>& cell);
void radial_laplacian_apply(std::span<const Complex> u, int l, const RadialGrid& g,
                            std::span<Complex> out);
std::vector<double> radial_laplacian(std::span<const double> u, int l, const RadialGrid& g);

// Face-based gradient quadrature chosen so that grad_norm_sq(u) equals
// inner(-Delta_0 u, u) to roundoff for any field (summation by parts).
double grad_norm_sq(std::span<const double> u, const RadialGrid& g);
double grad_norm_sq(std::span<const Complex> u, const RadialGrid& g);

// Centered O(h^2) radial derivative, even extension at the origin and odd
// (Dirichlet) reflection at r_max.
std::vector<double> radial_derivative(std::span<const double> u, const RadialGrid& g);

// Discrete dilation generator D ~ r d_r + 1.  Built so that W*D is exactly
// antisymmetric (W = diag(w)): <Du, u> = 0 to roundoff for every u, the
// discrete form of the L^2-norm-preserving dilation in two dimensions.
// Pointwise accuracy is O(h^2).
std::vector<double> dilation_apply(std::span<const double> u, const RadialGrid& g);

// Cubic (4-point Lagrange) interpolation of a nodal field at radius x >= 0.
// Even reflection across r=0, odd reflection across r=r_max, zero beyond.
double interp_cubic(std::span<const double> u, const RadialGrid& g, double x);

// Second moment sum_j w_j r_j^2 |u_j|^2 (corrected quadrature), the variance
// integral of the virial identity.
double second_moment(std::span<const double> u, const RadialGrid& g);
double second_moment(std::span<const Complex> u, const RadialGrid& g);

}  // namespace expnls

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "expnls/banded.hpp"
#include "expnls/profile.hpp"

namespace expnls {

enum class Which { Plus, Minus };

// One spherical-harmonic sector of a linearized operator:
//   L_{-,l} = -Delta_l + omega - g(phi^2)
//   L_{+,l} = -Delta_l + omega - (2 phi^2 g'(phi^2) + g(phi^2))
// stored as a tridiagonal matrix on the grid nodes.  The matrix is exactly
// symmetric under the w-weighted pairing; sym_bands() exposes the similarity
// transform B = W^{1/2} A W^{-1/2} used by the eigensolver.
class SectorOperator {
  public:
    SectorOperator(const ProfileSolution& sol, Which which, int l);

    // Test/utility constructor from explicit zeroth-order coefficient values.
    SectorOperator(std::shared_ptr<const RadialGrid> grid, ModelParams params,
                   Which which, int l, std::vector<double> potential);

    std::vector<double> apply(std::span<const double> v) const;

    // Direct banded solve.  When kernel_guard is present, rhs and solution are
    // projected onto its w-orthogonal complement (tolerance 1e-8 on the rhs).
    std::vector<double> solve(std::span<const double> rhs,
                              std::optional<std::span<const double>> kernel_guard =
                                  std::nullopt) const;

    SymTridiag sym_bands() const;          // symmetrized tridiagonal
    Tridiag bands() const;                 // raw (lower, diag, upper)

    // Weights under which this sector's matrix is exactly symmetric.  They
    // coincide with the grid weights for l = 0; for l >= 1 the regularized
    // stencil is symmetric under the cell integrals of 2 pi r^{2l+1} dr
    // pulled back by r^{-2l}.
    const std::vector<double>& sym_weights() const { return sym_w_; }
    const std::vector<double>& potential_values() const { return potential_; }
    const RadialGrid& grid() const { return *grid_; }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
    Which which() const { return which_; }
    int sector() const { return l_; }
    const ModelParams& params() const { return params_; }

  private:
    void assemble();

    std::shared_ptr<const RadialGrid> grid_;
    ModelParams params_;
    Which which_;
    int l_;
    std::vector<double> potential_;  // omega - V_{+/-}(phi(r)), per node
    std::vector<double> diag_, upper_, lower_, sym_off_, sym_w_;
};

SectorOperator assemble(const ProfileSolution& sol, Which which, int l);

}  // namespace expnls

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>

#include "expnls/banded.hpp"
#include "expnls/errors.hpp"

namespace expnls {

namespace {

// Tridiagonal bands of -Delta_0 in conservative form (see grid.cpp).
Tridiag laplacian_bands(const RadialGrid& g) {
    const int n = g.n;
    const double inv_h2 = 1.0 / (g.h * g.h);
    Tridiag t;
    t.diag.assign(n, 2.0 * inv_h2);
    t.diag[n - 1] = (3.0 * n - 1.0) * inv_h2 / (n - 0.5);
    t.lower.resize(n - 1);
    t.upper.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        t.upper[i] = -(i + 1.0) * inv_h2 / (i + 0.5);
        t.lower[i] = -(i + 1.0) * inv_h2 / (i + 1.5);
    }
    return t;
}

struct NewtonProblem {
    const RadialGrid& g;
    const ModelParams& p;
    Tridiag lap;

    double residual_norm(std::span<const double> phi, std::vector<double>& G) const {
        radial_laplacian_apply(phi, 0, g, G);
        double nrm = 0.0;
        for (int j = 0; j < g.n; ++j) {
            G[j] += p.omega * phi[j] - f_mu(phi[j], p);
            nrm = std::max(nrm, std::abs(G[j]));
        }
        return nrm;
    }

    // The max-norm residual cannot drop below roundoff of the stiffest term,
    // eps * (2/h^2) * |phi|; convergence is declared at max(tol, that floor).
    double residual_floor(std::span<const double> phi) const {
        double amp = 0.0;
        for (double x : phi) amp = std::max(amp, std::abs(x));
        return 100.0 * std::numeric_limits<double>::epsilon() * (2.0 / (g.h * g.h)) *
               std::max(amp, 1e-3);
    }

    // damped Newton on the full discrete boundary-value problem
    bool solve(std::vector<double>& phi, double tol, int max_iter) const {
        const int n = g.n;
        std::vector<double> G(n), trial(n), Gt(n);
        double rnorm;
        try {
            rnorm = residual_norm(phi, G);
        } catch (const saturation_error&) {
            return false;
        }
        for (int it = 0; it < max_iter; ++it) {
            if (rnorm <= tol) return true;
            Tridiag J = lap;
            for (int j = 0; j < n; ++j) J.diag[j] += p.omega - lplus_potential(phi[j], p);
            std::vector<double> rhs(n);
            for (int j = 0; j < n; ++j) rhs[j] = -G[j];
            std::vector<double> delta = solve_tridiag(J, rhs);
            double step = 1.0;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                for (int j = 0; j < n; ++j) trial[j] = phi[j] + step * delta[j];
                try {
                    const double tnorm = residual_norm(trial, Gt);
                    if (tnorm < rnorm || tnorm <= tol) {
                        phi.swap(trial);
                        G.swap(Gt);
                        rnorm = tnorm;
                        accepted = true;
                        break;
                    }
                } catch (const saturation_error&) {
                    // trial left the physical amplitude range; shrink
                }
                step *= 0.5;
            }
            if (!accepted) return rnorm <= std::max(tol, residual_floor(phi));
        }
        return rnorm <= std::max(tol, residual_floor(phi));
    }
};

// Outward integration of the profile equation phi'' = -phi'/r + omega phi -
// f(phi) from the series start at the first node.  Returns +1 when the
// trajectory turns up and grows (overshoot side, the generic exponentially
// growing branch), -1 when it crosses zero (undershoot side).  Node values
// collected along the way seed the Newton polish.
struct MarchResult {
    int sign = 0;
    int valid_nodes = 0;          // node samples filled before the event
    std::vector<double> at_nodes;
};

MarchResult march_profile(const ModelParams& p, const RadialGrid& g, double a, int substeps) {
    MarchResult res;
    res.at_nodes.assign(g.n, 0.0);
    const double c2 = 0.25 * (p.omega * a - f_mu(a, p));
    double r = g.r[0];
    double phi = a + c2 * r * r;
    double psi = 2.0 * c2 * r;
    res.at_nodes[0] = phi;
    res.valid_nodes = 1;
    const double hs = g.h / substeps;
    auto rhs = [&](double rr, double f0, double f1, double& d0, double& d1) {
        d0 = f1;
        const double z = f0 * f0;
        // inline the nonlinearity to sidestep the saturation throw; the
        // event tests catch runaway amplitudes first
        const double fv = (z < 36.0) ? (std::expm1(4.0 * std::numbers::pi * z) -
                                        4.0 * std::numbers::pi * p.mu * z) *
                                           f0
                                     : 1e300;
        d1 = -f1 / rr + p.omega * f0 - fv;
    };
    for (int j = 1; j < g.n; ++j) {
        for (int s = 0; s < substeps; ++s) {
            double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
            rhs(r, phi, psi, k1p, k1q);
            rhs(r + 0.5 * hs, phi + 0.5 * hs * k1p, psi + 0.5 * hs * k1q, k2p, k2q);
            rhs(r + 0.5 * hs, phi + 0.5 * hs * k2p, psi + 0.5 * hs * k2q, k3p, k3q);
            rhs(r + hs, phi + hs * k3p, psi + hs * k3q, k4p, k4q);
            phi += hs / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            psi += hs / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            r += hs;
            if (!std::isfinite(phi) || phi > 1.05 * a) {
                res.sign = +1;
                return res;
            }
            if (phi < 0.0) {
                res.sign = -1;
                return res;
            }
        }
        res.at_nodes[j] = phi;
        res.valid_nodes = j + 1;
    }
    // reached the boundary without an event: the leftover value decides
    res.sign = (psi > 0.0 || phi > 1e-10 * a) ? +1 : -1;
    return res;
}

// initial Newton guess: marched core plus the exponential tail
// c e^{-sqrt(omega) r} / sqrt(r) grafted where the march loses accuracy
std::vector<double> graft_tail(const MarchResult& m, const ModelParams& p, const RadialGrid& g) {
    const double sw = std::sqrt(p.omega);
    int g_idx = std::min(m.valid_nodes - 1,
                         static_cast<int>(std::floor(12.0 / (sw * g.h) - 0.5)));
    g_idx = std::max(g_idx, 2);
    std::vector<double> out(g.n);
    for (int j = 0; j <= g_idx; ++j) out[j] = m.at_nodes[j];
    const double rg = g.r[g_idx];
    const double vg = std::max(m.at_nodes[g_idx], 1e-280);
    for (int j = g_idx + 1; j < g.n; ++j)
        out[j] = vg * std::sqrt(rg / g.r[j]) * std::exp(-sw * (g.r[j] - rg));
    return out;
}

}  // namespace

double residual_eq20(std::span<const double> v, const ModelParams& p, const RadialGrid& g) {
    std::vector<double> G(g.n);
    radial_laplacian_apply(v, 0, g, G);
    double nrm = 0.0;
    for (int j = 0; j < g.n; ++j)
        nrm = std::max(nrm, std::abs(G[j] + p.omega * v[j] - f_mu(v[j], p)));
    return nrm;
}

ProfileSolution shoot_profile(const ModelParams& p, std::shared_ptr<const RadialGrid> grid,
                              const ShootConfig& cfg) {
    validate(p);
    const RadialGrid& g = *grid;
    if (g.r_max * std::sqrt(p.omega) < 20.0)
        throw parameter_error("shoot_profile: grid too small, need r_max*sqrt(omega) >= 20");

    const int substeps = 4;

    // coarse amplitude ladder: find the overshoot/undershoot sign change
    const int m = std::max(8, cfg.scan_points);
    double a_lo = 0.0, a_hi = 0.0;
    int prev_sign = 0;
    double prev_a = 0.0;
    for (int k = 0; k < m; ++k) {
        const double a =
            cfg.amp_lo * std::pow(cfg.amp_hi / cfg.amp_lo, static_cast<double>(k) / (m - 1));
        const int sign = march_profile(p, g, a, substeps).sign;
        if (prev_sign != 0 && sign != prev_sign) {
            a_lo = prev_a;
            a_hi = a;
            break;
        }
        prev_sign = sign;
        prev_a = a;
    }
    if (a_hi == 0.0)
        throw bracket_error("shoot_profile: no overshoot/undershoot transition in [" +
                            std::to_string(cfg.amp_lo) + ", " + std::to_string(cfg.amp_hi) + "]");

    // bisection on the starting amplitude
    int sign_lo = march_profile(p, g, a_lo, substeps).sign;
    while (a_hi - a_lo > cfg.amp_rel_tol * a_hi) {
        const double a_mid = 0.5 * (a_lo + a_hi);
        if (a_mid == a_lo || a_mid == a_hi) break;
        const int sign_mid = march_profile(p, g, a_mid, substeps).sign;
        if (sign_mid == sign_lo)
            a_lo = a_mid;
        else
            a_hi = a_mid;
    }

    const double a_star = 0.5 * (a_lo + a_hi);
    MarchResult core = march_profile(p, g, a_star, substeps);
    std::vector<double> phi = graft_tail(core, p, g);

    NewtonProblem prob{g, p, laplacian_bands(g)};
    if (!prob.solve(phi, cfg.newton_tol, cfg.newton_max))
        throw bracket_error("shoot_profile: Newton polish did not converge from the marched core");

    // ground-state validation: positive, strictly decreasing
    for (int j = 0; j < g.n; ++j) {
        if (!(phi[j] > 0.0))
            throw ground_state_error("shoot_profile: profile not strictly positive at node " +
                                     std::to_string(j));
        if (j > 0 && !(phi[j] < phi[j - 1]))
            throw ground_state_error("shoot_profile: profile not strictly decreasing at node " +
                                     std::to_string(j));
    }

    ProfileSolution sol;
    sol.params = p;
    sol.field = RadialField{grid, phi};
    sol.amplitude = (9.0 * phi[0] - phi[1]) / 8.0;
    const FunctionalReport rep = functionals(std::span<const double>(phi), g, p);
    sol.mass = rep.mass;
    sol.energy = rep.energy;
    sol.action = rep.action;
    sol.grad_norm_sq = grad_norm_sq(std::span<const double>(phi), g);
    sol.equation_residual = residual_eq20(phi, p, g);
    const PohozaevResiduals poh = pohozaev_check(sol);
    sol.pohozaev_42_residual = poh.r42;
    sol.pohozaev_45_residual = poh.r45;
    sol.decay_rate_fit = fit_decay(phi, g);
    return sol;
}

PohozaevResiduals pohozaev_check(const ProfileSolution& sol) {
    const RadialGrid& g = *sol.field.grid;
    const ModelParams& p = sol.params;
    std::span<const double> phi(sol.field.values);
    const int n = g.n;
    std::vector<double> phi2(n), bigF(n), fphi(n);
    for (int j = 0; j < n; ++j) {
        phi2[j] = phi[j] * phi[j];
        bigF[j] = F_mu(phi[j], p);
        fphi[j] = f_mu(phi[j], p) * phi[j];
    }
    PohozaevResiduals res;
    // scaling identity, corrected quadrature on both sides
    const double intF = integrate(bigF, g);
    res.r42 = std::abs(0.5 * p.omega * integrate(phi2, g) - intF) / std::abs(intF);
    // multiplier identity: the pairing <eq, phi> under the plain discrete
    // weights, which the converged solver drives to roundoff
    double mass_plain = 0.0, fphi_plain = 0.0;
    for (int j = 0; j < n; ++j) {
        mass_plain += g.w[j] * phi2[j];
        fphi_plain += g.w[j] * fphi[j];
    }
    const double grad = grad_norm_sq(phi, g);
    res.r45 = std::abs(grad + p.omega * mass_plain - fphi_plain) / std::abs(fphi_plain);
    return res;
}

double fit_decay(std::span<const double> values, const RadialGrid& g) {
    const double r_lo = 0.5 * g.r_max, r_hi = 0.9 * g.r_max;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int j = 0; j < g.n; ++j) {
        if (g.r[j] < r_lo || g.r[j] > r_hi) continue;
        const double v = values[j];
        if (!(v > 1e-280)) continue;
        const double x = g.r[j];
        const double y = std::log(v * std::sqrt(g.r[j]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 8)
        throw window_error("fit_decay: fewer than 8 usable tail nodes in the fit window");
    const double denom = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / denom;
    return -slope;
}

double fit_decay(const ProfileSolution& sol) { return fit_decay(sol.field.values, *sol.field.grid); }

RadialField rescale(const ProfileSolution& sol, double lambda) {
    if (!(lambda > 0.0)) throw parameter_error("rescale: lambda must be positive");
    const RadialGrid& g = *sol.field.grid;
    std::vector<double> out(g.n);
    for (int j = 0; j < g.n; ++j)
        out[j] = lambda * interp_cubic(sol.field.values, g, lambda * g.r[j]);
    return RadialField{sol.field.grid, std::move(out)};
}

}  // namespace expnls

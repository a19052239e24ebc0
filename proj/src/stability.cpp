// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "expnls/dynamics.hpp"
#include "expnls/errors.hpp"

namespace expnls {

namespace {

// The growing mode solves -L_- L_+ v1 = lambda^2 v1 on the radial sector.
// The composed operator C restricted to the w-orthogonal complement of the
// phase kernel is self-adjoint under <u, v>_M := <u, (L_-|_perp)^{-1} v>_w,
// its spectrum there being {lambda^2} plus negative values from the
// oscillatory modes.  Shift-inverted power iteration with Rayleigh updates
// therefore isolates lambda^2.
class ComposedSolver {
  public:
    ComposedSolver(const ProfileSolution& sol)
        : g_(*sol.field.grid),
          lp_(sol, Which::Plus, 0),
          lm_(sol, Which::Minus, 0) {
        const SymTridiag mb = lm_.sym_bands();
        const double lam0 = eigenvalue_by_index(mb, 0);
        kernel_ = to_grid(eigenvector(mb, lam0));
        kernel_eig_ = lam0;
    }

    const RadialGrid& grid() const { return g_; }
    const SectorOperator& lplus() const { return lp_; }
    const SectorOperator& lminus() const { return lm_; }
    double kernel_eig() const { return kernel_eig_; }

    std::vector<double> apply_C(std::span<const double> v) const {
        std::vector<double> t = lp_.apply(v);
        std::vector<double> u = lm_.apply(t);
        for (double& x : u) x = -x;
        return u;
    }

    void project(std::vector<double>& v) const {
        const double c = inner(v, kernel_, g_);
        for (int j = 0; j < g_.n; ++j) v[j] -= c * kernel_[j];
    }

    double m_inner(std::span<const double> a, std::span<const double> b) const {
        std::vector<double> bp(b.begin(), b.end());
        project(bp);
        std::vector<double> sol = lm_.solve(bp, std::span<const double>(kernel_));
        return inner(a, sol, g_);
    }

    // banded LU of (C - s I)
    BandLU factor(double s) const {
        const Tridiag p = lp_.bands();
        const Tridiag m = lm_.bands();
        const int n = g_.n;
        auto mp = [&](const Tridiag& t, int i, int j) -> double {
            if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
            if (i == j) return t.diag[i];
            if (j == i + 1) return t.upper[i];
            if (j == i - 1) return t.lower[j];
            return 0.0;
        };
        auto entry = [&, n](int i, int j) -> double {
            double s_ij = 0.0;
            for (int k = std::max({0, i - 1, j - 1}); k <= std::min({n - 1, i + 1, j + 1}); ++k)
                s_ij += mp(m, i, k) * mp(p, k, j);
            double c = -s_ij;
            if (i == j) c -= s;
            return c;
        };
        return BandLU(n, 2, 2, entry);
    }

  private:
    std::vector<double> to_grid(const std::vector<double>& y) const {
        std::vector<double> v(y.size());
        for (size_t j = 0; j < y.size(); ++j) v[j] = y[j] / std::sqrt(g_.w[j]);
        const double nrm = norm_w(v, g_);
        for (double& x : v) x /= nrm;
        return v;
    }

    const RadialGrid& g_;
    SectorOperator lp_, lm_;
    std::vector<double> kernel_;
    double kernel_eig_ = 0.0;
};

struct IterationResult {
    double lambda_sq = 0.0;
    std::vector<double> v;
    bool converged = false;
};

// Power iteration on (C - s)^{-1} restricted to the kernel complement, with
// optional M-orthogonal deflation of an already-found eigenvector.  The
// transformed spectrum is dominated by the eigenvalue nearest the shift, so
// the shift escalates geometrically until the positive eigenvalue (when one
// exists) wins over the oscillatory branch, then switches to Rayleigh
// updates.
IterationResult iterate_composed(const ComposedSolver& cs, double omega, int max_iter,
                                 double tol, const std::vector<double>* deflate,
                                 double shift0 = 0.0, int attempts = 10) {
    const RadialGrid& g = cs.grid();
    const int n = g.n;
    double deflate_mm = 0.0;
    if (deflate) deflate_mm = cs.m_inner(*deflate, *deflate);
    auto deflate_out = [&](std::vector<double>& v) {
        cs.project(v);
        if (!deflate) return;
        const double c = cs.m_inner(*deflate, v) / deflate_mm;
        for (int j = 0; j < n; ++j) v[j] -= c * (*deflate)[j];
    };

    IterationResult res;
    const bool trace = std::getenv("EXPNLS_DEBUG_MODE") != nullptr;
    double best_negative = -std::numeric_limits<double>::infinity();
    if (shift0 <= 0.0) shift0 = omega * omega;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        double s = shift0 * std::pow(8.0, attempt);
        BandLU lu = cs.factor(s);
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) {
            const double r = g.r[j];
            x[j] = std::exp(-omega * r * r) * (1.0 + 0.3 * r);
        }
        deflate_out(x);
        {
            const double nx = norm_w(x, g);
            for (double& t : x) t /= nx;
        }
        double lambda_sq = 0.0;
        bool converged = false;
        int since_refactor = 0;
        double best_res = std::numeric_limits<double>::infinity();
        int since_improved = 0;
        for (int it = 0; it < max_iter; ++it) {
            std::vector<double> y = lu.solve(x);
            deflate_out(y);
            const double ny = norm_w(y, g);
            if (!(ny > 0.0) || !std::isfinite(ny)) break;
            for (double& t : y) t /= ny;
            x.swap(y);

            // Rayleigh quotient of C in the M pairing
            std::vector<double> Cx = cs.apply_C(x);
            const double num = cs.m_inner(Cx, x);
            const double den = cs.m_inner(x, x);
            lambda_sq = num / den;

            std::vector<double> r(n);
            for (int j = 0; j < n; ++j) r[j] = Cx[j] - lambda_sq * x[j];
            const double rnorm = norm_w(r, g);
            const double scale = std::max(std::abs(lambda_sq), omega * omega);
            if (trace && (it % 10 == 0 || rnorm < tol * scale))
                std::fprintf(stderr, "[mode] attempt=%d it=%d s=%.6g lam2=%.9g res=%.3e\n",
                             attempt, it, s, lambda_sq, rnorm);
            if (rnorm < tol * scale) {
                converged = true;
                break;
            }
            if (rnorm < 0.5 * best_res) {
                best_res = rnorm;
                since_improved = 0;
            } else if (++since_improved > 60) {
                // stalled at the floating-point floor of this branch; treat a
                // well-resolved eigenvalue as converged, else escalate
                converged = rnorm < 1e-5 * scale;
                break;
            }
            ++since_refactor;
            if (lambda_sq > 0.0 && since_refactor >= 6 &&
                std::abs(lambda_sq - s) > 1e-10 * scale) {
                s = lambda_sq * (1.0 + 1e-9);
                lu = cs.factor(s);
                since_refactor = 0;
            }
        }
        if (converged && lambda_sq > 0.0) {
            // polish against the sequential-apply residual (floor eps*|L|),
            // with the factored shift as a mere preconditioner so its
            // product-roundoff (eps*|L|^2) no longer limits the vector
            double best = std::numeric_limits<double>::infinity();
            std::vector<double> xbest = x;
            double lam_best = lambda_sq;
            for (int k = 0; k < 60; ++k) {
                std::vector<double> Cx = cs.apply_C(x);
                const double num = cs.m_inner(Cx, x);
                const double den = cs.m_inner(x, x);
                lambda_sq = num / den;
                std::vector<double> r(n);
                for (int j = 0; j < n; ++j) r[j] = Cx[j] - lambda_sq * x[j];
                const double rnorm = norm_w(r, g);
                if (trace)
                    std::fprintf(stderr, "[mode] refine k=%d lam2=%.12g res=%.3e\n", k,
                                 lambda_sq, rnorm);
                if (rnorm < best) {
                    best = rnorm;
                    xbest = x;
                    lam_best = lambda_sq;
                } else if (k > 6) {
                    break;  // stalled at the apply-route floor
                }
                std::vector<double> d = lu.solve(r);
                deflate_out(d);
                for (int j = 0; j < n; ++j) x[j] -= d[j];
                deflate_out(x);
                const double nx = norm_w(x, g);
                for (double& t : x) t /= nx;
            }
            res.converged = true;
            res.lambda_sq = lam_best;
            res.v = std::move(xbest);
            return res;
        }
        // ended on the oscillatory branch (or stalled); a larger shift may
        // still uncover a positive eigenvalue beyond the dominance window
        if (converged) best_negative = std::max(best_negative, lambda_sq);
        res.lambda_sq = lambda_sq;
        res.converged = converged;
        res.v = std::move(x);
    }
    if (std::isfinite(best_negative)) {
        res.lambda_sq = best_negative;
        res.converged = true;
    }
    return res;
}

}  // namespace

GrowingMode growing_mode(const ProfileSolution& sol, const GrowingModeConfig& cfg) {
    const RadialGrid& g = *sol.field.grid;
    const double omega = sol.params.omega;
    // classification window for the O(h^2) drift of exact symmetry kernels
    const double tol_drift = 0.25 * omega;

    // sectors l >= 1: both operators nonnegative there means the linearized
    // flow is purely oscillatory in those sectors, so only l = 0 can carry a
    // growing mode.  The l=1 translation kernel drifts O(h^2) around zero; a
    // negative lowest eigenvalue there is accepted only when its eigenfield
    // aligns with the analytic kernel direction phi'.
    for (int l = 1; l <= cfg.sector_scan_max; ++l) {
        SectorOperator lp(sol, Which::Plus, l);
        SectorOperator lm(sol, Which::Minus, l);
        const double ep = eigenvalue_by_index(lp.sym_bands(), 0);
        const double em = eigenvalue_by_index(lm.sym_bands(), 0);
        bool plus_ok = ep >= -tol_drift;
        if (!plus_ok && l == 1) {
            std::vector<double> y = eigenvector(lp.sym_bands(), ep);
            const RadialGrid& gg = *sol.field.grid;
            std::vector<double> v(gg.n);
            for (int j = 0; j < gg.n; ++j) v[j] = y[j] / std::sqrt(lp.sym_weights()[j]);
            std::vector<double> dphi = radial_derivative(sol.field.values, gg);
            const double align =
                std::abs(inner(v, dphi, gg)) / (norm_w(v, gg) * norm_w(dphi, gg));
            // decisive against a genuinely new direction, which would sit
            // near-orthogonal to phi'; coarse grids deform the drifted
            // kernel vector by a few percent
            plus_ok = align > 0.95;
        }
        if (!plus_ok || em < -tol_drift)
            throw multiplicity_error("growing_mode: unexpected negative direction in sector l=" +
                                     std::to_string(l));
    }

    ComposedSolver cs(sol);
    IterationResult main = iterate_composed(cs, omega, cfg.max_iterations, 1e-9, nullptr);
    if (!(main.lambda_sq > 0.0))
        throw stability_error("growing_mode: composed operator has no positive eigenvalue "
                              "(lambda^2 estimate " +
                              std::to_string(main.lambda_sq) + ")");
    if (!main.converged)
        throw iteration_limit_error("growing_mode: power iteration did not converge");

    GrowingMode mode;
    mode.sector = 0;
    mode.lambda_sq_rayleigh = main.lambda_sq;
    mode.lambda = std::sqrt(main.lambda_sq);
    mode.v1 = std::move(main.v);
    if (mode.v1[0] < 0.0)
        for (double& x : mode.v1) x = -x;
    std::vector<double> lpv = cs.lplus().apply(mode.v1);
    mode.v2.resize(g.n);
    for (int j = 0; j < g.n; ++j) mode.v2[j] = -lpv[j] / mode.lambda;

    // joint normalization |v1|^2 + |v2|^2 = 1
    const double nrm = std::sqrt(inner(mode.v1, mode.v1, g) + inner(mode.v2, mode.v2, g));
    for (double& x : mode.v1) x /= nrm;
    for (double& x : mode.v2) x /= nrm;

    // first-order system residual
    std::vector<double> r1 = cs.lminus().apply(mode.v2);
    for (int j = 0; j < g.n; ++j) r1[j] -= mode.lambda * mode.v1[j];
    std::vector<double> r2 = cs.lplus().apply(mode.v1);
    for (int j = 0; j < g.n; ++j) r2[j] += mode.lambda * mode.v2[j];
    const double denom = norm_w(mode.v1, g) + norm_w(mode.v2, g);
    mode.residual = std::max(norm_w(r1, g), norm_w(r2, g)) / denom;
    if (!(mode.residual < cfg.residual_tol)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", mode.residual);
        throw iteration_limit_error(std::string("growing_mode: first-order residual ") + buf +
                                    " above tolerance");
    }

    // second candidate must not be another positive eigenvalue
    // a hypothetical second real mode would sit below the first; the ladder
    // covers (0, ~60 lambda^2] which the count identity already excludes
    IterationResult second = iterate_composed(cs, omega, cfg.max_iterations, 1e-7, &mode.v1,
                                              main.lambda_sq / 8.0, 4);
    mode.second_candidate = second.lambda_sq;
    if (second.lambda_sq > 1e-4 * main.lambda_sq)
        throw multiplicity_error("growing_mode: second positive eigenvalue " +
                                 std::to_string(second.lambda_sq) + " detected");
    return mode;
}

double growth_rate_from_dynamics(const ProfileSolution& sol, const GrowingMode& mode,
                                 double perturbation_scale, const GrowthFitConfig& cfg) {
    const RadialGrid& g = *sol.field.grid;
    const double phinorm = norm_w(sol.field.values, g);
    if (!(perturbation_scale > 0.0) || perturbation_scale > 1e-4 * phinorm)
        throw parameter_error("growth_rate_from_dynamics: perturbation scale must sit in "
                              "(0, 1e-4 |phi|]");
    const double eps = perturbation_scale;
    const int n = g.n;
    ComplexField u0{sol.field.grid, std::vector<Complex>(n)};
    for (int j = 0; j < n; ++j)
        u0.values[j] = Complex(sol.field.values[j] + eps * mode.v1[j], eps * mode.v2[j]);

    // resolve the e-folding time: the deviation window spans ln(10)/lambda
    const double lam = std::max(mode.lambda, 0.05);
    const double horizon = (cfg.horizon > 0.0) ? cfg.horizon : (9.0 / lam);
    std::vector<std::pair<double, double>> samples;
    EvolveConfig ec;
    ec.dt = std::min(cfg.dt, 0.04 / lam);
    ec.t_end = horizon;
    ec.sample_every = std::min(cfg.sample_every, std::log(10.0) / (6.0 * lam));
    ec.observer = [&](double t, std::span<const Complex> u) {
        std::vector<double> dev(n);
        for (int j = 0; j < n; ++j) dev[j] = std::abs(u[j]) - sol.field.values[j];
        samples.emplace_back(t, norm_w(dev, g));
    };
    evolve(u0, sol.params, ec);

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (const auto& [t, d] : samples) {
        if (d <= 10.0 * eps || d >= 100.0 * eps) continue;
        const double y = std::log(d);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++count;
    }
    if (count < 5)
        throw horizon_error("growth_rate_from_dynamics: deviation window (10 eps, 100 eps) "
                            "never sampled within the horizon");
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace expnls

// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expnls/banded.hpp"
#include "expnls/errors.hpp"

namespace expnls {

namespace {

// Discrete conserved quantities paired with the flux-form operator: plain
// w-sums, not the endpoint-corrected quadrature.  The implicit midpoint step
// keeps the mass below exactly (up to the fixed-point tolerance).
double mass_plain(std::span<const Complex> u, const RadialGrid& g) {
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * std::norm(u[j]);
    return s;
}

double energy_plain(std::span<const Complex> u, const RadialGrid& g, const ModelParams& p,
                    bool linear_only) {
    double e = 0.5 * grad_norm_sq(u, g);
    if (!linear_only) {
        double s = 0.0;
        for (int j = 0; j < g.n; ++j) s += g.w[j] * F_mu(std::abs(u[j]), p);
        e -= s;
    }
    return e;
}

double virial_i_plain(std::span<const Complex> u, const RadialGrid& g, const ModelParams& p,
                      bool linear_only) {
    double grad = grad_norm_sq(u, g);
    if (linear_only) return grad;
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double a = std::abs(u[j]);
        s += g.w[j] * (a * f_mu(a, p) - 2.0 * F_mu(a, p));
    }
    return grad - s;
}

EvolutionState snapshot(double t, const ComplexField& u, const ModelParams& p,
                        bool linear_only, bool keep_field) {
    const RadialGrid& g = *u.grid;
    EvolutionState st;
    st.t = t;
    st.mass = mass_plain(u.values, g);
    st.energy = energy_plain(u.values, g, p, linear_only);
    st.grad_norm_sq = grad_norm_sq(std::span<const Complex>(u.values), g);
    st.virial_moment = second_moment(std::span<const Complex>(u.values), g);
    st.virial_i = virial_i_plain(u.values, g, p, linear_only);
    if (keep_field) st.field = u;
    return st;
}

}  // namespace

EvolveConfig default_evolve_config(const ModelParams& p) {
    EvolveConfig cfg;
    cfg.dt = 1e-3 / p.omega;
    cfg.t_end = 20.0 / p.omega;
    cfg.sample_every = 0.05 / p.omega;
    return cfg;
}

TrajectoryReport evolve(const ComplexField& u0, const ModelParams& p, const EvolveConfig& cfg) {
    validate(p);
    const RadialGrid& g = *u0.grid;
    const int n = g.n;
    if (static_cast<int>(u0.values.size()) != n) throw dimension_error("evolve: field/grid mismatch");
    if (!(cfg.dt > 0.0)) throw parameter_error("evolve: dt must be positive");
    const double grad0 = grad_norm_sq(std::span<const Complex>(u0.values), g);
    // the local theory lives below the gradient threshold; free propagation
    // has no such restriction
    if (!cfg.linear_only && !(grad0 < 1.0))
        throw threshold_error("evolve: |grad u0|^2 = " + std::to_string(grad0) +
                              " is not below the local-theory threshold 1");

    // bands of -Delta_0 (same flux stencil as the assembled operators)
    const double inv_h2 = 1.0 / (g.h * g.h);
    std::vector<double> lap_diag(n, 2.0 * inv_h2), lap_lower(n - 1), lap_upper(n - 1);
    lap_diag[n - 1] = (3.0 * n - 1.0) * inv_h2 / (n - 0.5);
    for (int i = 0; i + 1 < n; ++i) {
        lap_upper[i] = -(i + 1.0) * inv_h2 / (i + 0.5);
        lap_lower[i] = -(i + 1.0) * inv_h2 / (i + 1.5);
    }
    auto apply_lap = [&](std::span<const Complex> v, std::span<Complex> out) {
        for (int j = 0; j < n; ++j) {
            Complex s = lap_diag[j] * v[j];
            if (j > 0) s += lap_lower[j - 1] * v[j - 1];
            if (j + 1 < n) s += lap_upper[j] * v[j + 1];
            out[j] = s;
        }
    };

    TrajectoryReport rep;
    rep.params = p;
    ComplexField u = u0;
    double t = 0.0;
    double dt_base = cfg.dt, dt = cfg.dt;
    double next_sample = 0.0;

    auto grad_of = [&](const std::vector<Complex>& v) {
        return grad_norm_sq(std::span<const Complex>(v), g);
    };

    auto take_sample = [&](double when) {
        rep.states.push_back(snapshot(when, u, p, cfg.linear_only, cfg.keep_fields));
        if (cfg.observer) cfg.observer(when, u.values);
    };
    take_sample(0.0);
    next_sample = cfg.sample_every;

    std::vector<Complex> cn_lower(n - 1), cn_diag(n), cn_upper(n - 1);
    std::vector<Complex> rhs_lin(n), unew(n), umid(n), lap_buf(n), rhs(n);
    const Complex ihalf(0.0, 0.5);

    const double blowup_level = 1.0 - cfg.delta_blowup;
    bool grad_was_rising = false;
    double last_grad = grad0;

    while (t < cfg.t_end - 1e-12 * cfg.t_end) {
        dt = std::min(dt, cfg.t_end - t);
        // assemble (I + i dt/2 (-Delta)) and the explicit linear half
        bool step_ok = false;
        int halvings = 0;
        while (!step_ok) {
            const Complex a = ihalf * dt;  // i*dt/2
            for (int j = 0; j < n; ++j) cn_diag[j] = 1.0 + a * lap_diag[j];
            for (int j = 0; j + 1 < n; ++j) {
                cn_lower[j] = a * lap_lower[j];
                cn_upper[j] = a * lap_upper[j];
            }
            apply_lap(u.values, lap_buf);
            for (int j = 0; j < n; ++j) rhs_lin[j] = u.values[j] - a * lap_buf[j];

            // fixed point on the midpoint nonlinearity
            std::copy(u.values.begin(), u.values.end(), umid.begin());
            double change = std::numeric_limits<double>::infinity();
            double prev_change = change;
            bool diverged = false;
            for (int it = 0; it < cfg.fp_max; ++it) {
                for (int j = 0; j < n; ++j) {
                    Complex nl(0.0, 0.0);
                    if (!cfg.linear_only) {
                        const double z = std::norm(umid[j]);
                        if (z > kAmplitudeCap * kAmplitudeCap) {
                            diverged = true;
                            break;
                        }
                        nl = Complex(0.0, dt) * (g_fun(z, p) * umid[j]);
                    }
                    rhs[j] = rhs_lin[j] + nl;
                }
                if (diverged) break;
                std::copy(rhs.begin(), rhs.end(), unew.begin());
                solve_tridiag_dominant(cn_lower, cn_diag, cn_upper, unew);
                double diff = 0.0, scale = 0.0;
                for (int j = 0; j < n; ++j) {
                    scale = std::max(scale, std::abs(unew[j]));
                    const Complex m = 0.5 * (u.values[j] + unew[j]);
                    diff = std::max(diff, std::abs(m - umid[j]));
                    umid[j] = m;
                }
                if (diff <= cfg.fp_tol * std::max(1.0, scale)) {
                    step_ok = true;
                    break;
                }
                if (it > 3 && diff > 4.0 * prev_change) {
                    diverged = true;
                    break;
                }
                prev_change = diff;
            }
            if (step_ok) break;
            if (++halvings > cfg.max_halvings) {
                // divergence with a rising gradient norm is the collapse
                // signature; otherwise report the step failure
                if (grad_was_rising) {
                    rep.outcome = Outcome::BlowupDetected;
                    rep.blowup_time_estimate = t;
                } else {
                    rep.outcome = Outcome::StepFailure;
                }
                take_sample(t);
                rep.final_field = u;
                if (rep.states.size() >= 5) rep.virial_identity_residual = virial_check(rep);
                return rep;
            }
            dt *= 0.5;
        }

        u.values = unew;
        t += dt;
        const double gnow = grad_of(u.values);
        grad_was_rising = gnow > last_grad;
        last_grad = gnow;

        if (t >= next_sample - 1e-9 * cfg.sample_every) {
            take_sample(t);
            next_sample += cfg.sample_every;
        }
        if (!cfg.linear_only && gnow >= blowup_level) {
            rep.outcome = Outcome::BlowupDetected;
            rep.blowup_time_estimate = t;
            if (rep.states.back().t < t) take_sample(t);
            break;
        }
        // recover the base step after a successful halved step
        if (dt < dt_base) dt = std::min(dt_base, dt * 2.0);
    }

    if (rep.outcome == Outcome::Completed && rep.states.back().t < t) take_sample(t);
    rep.final_field = u;
    if (rep.states.size() >= 5) rep.virial_identity_residual = virial_check(rep);
    return rep;
}

double virial_check(const TrajectoryReport& report) {
    const auto& st = report.states;
    if (st.size() < 5) throw sampling_error("virial_check: need at least 5 samples");
    // exclude the terminal phase of a collapsing run
    size_t last = st.size();
    if (report.outcome == Outcome::BlowupDetected) {
        while (last > 5 && st[last - 1].grad_norm_sq > 0.6) --last;
    }
    double scale = 0.0;
    for (size_t k = 0; k < last; ++k) scale = std::max(scale, std::abs(8.0 * st[k].virial_i));
    // natural curvature scale of |x u|^2; keeps near-stationary runs from
    // dividing by their own discretization-level virial defect
    const double omega = report.params.omega;
    scale = std::max(scale, omega * omega * st[0].virial_moment);
    double worst = 0.0;
    for (size_t k = 1; k + 1 < last; ++k) {
        const double dt1 = st[k].t - st[k - 1].t;
        const double dt2 = st[k + 1].t - st[k].t;
        if (std::abs(dt1 - dt2) > 1e-9 * std::max(dt1, dt2)) continue;  // uneven: skip
        const double second =
            (st[k + 1].virial_moment - 2.0 * st[k].virial_moment + st[k - 1].virial_moment) /
            (dt1 * dt2);
        worst = std::max(worst, std::abs(second - 8.0 * st[k].virial_i) / scale);
    }
    return worst;
}

std::vector<BlowupRow> blowup_experiment(const ProfileSolution& sol,
                                         std::span<const double> lambdas,
                                         const EvolveConfig& cfg) {
    const RadialGrid& g = *sol.field.grid;
    std::vector<BlowupRow> rows;
    rows.reserve(lambdas.size());
    for (double lambda : lambdas) {
        BlowupRow row;
        row.lambda = lambda;
        RadialField init = rescale(sol, lambda);
        const FunctionalReport rep =
            functionals(std::span<const double>(init.values), g, sol.params, sol.action);
        row.energy = rep.energy;
        row.virial_i = rep.virial_i;
        row.action = rep.action;
        row.grad_norm_sq = grad_norm_sq(std::span<const double>(init.values), g);
        row.variance = second_moment(std::span<const double>(init.values), g);
        row.energy_positive = row.energy > 0.0;
        row.virial_negative = row.virial_i < 0.0;
        row.action_below = row.action < sol.action;
        row.gradient_below_one = row.grad_norm_sq < 1.0;
        row.kminus_member = rep.kset == KSet::KMinus;
        row.conditions_ok = row.energy_positive && row.virial_negative && row.action_below &&
                            row.gradient_below_one && row.kminus_member &&
                            std::isfinite(row.variance);
        if (!row.gradient_below_one) {
            rows.push_back(row);  // cannot even start the evolution
            continue;
        }
        ComplexField u0{sol.field.grid, std::vector<Complex>(g.n)};
        for (int j = 0; j < g.n; ++j) u0.values[j] = Complex(init.values[j], 0.0);
        TrajectoryReport traj = evolve(u0, sol.params, cfg);
        row.outcome = traj.outcome;
        row.blowup_time_estimate = traj.blowup_time_estimate;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace expnls

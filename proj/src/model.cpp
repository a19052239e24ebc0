// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/model.hpp"

#include <cmath>
#include <numbers>

#include "expnls/errors.hpp"

namespace expnls {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_amplitude(double u) {
    if (!(std::abs(u) <= kAmplitudeCap))
        throw saturation_error("nonlinearity amplitude " + std::to_string(u) +
                               " beyond cap " + std::to_string(kAmplitudeCap));
}
void check_z(double z) {
    if (!(z >= 0.0))
        throw parameter_error("g_fun/g_prime: argument must be nonnegative");
    if (!(z <= kAmplitudeCap * kAmplitudeCap))
        throw saturation_error("nonlinearity argument z=" + std::to_string(z) +
                               " beyond cap " + std::to_string(kAmplitudeCap * kAmplitudeCap));
}
}  // namespace

void validate(const ModelParams& p) {
    if (!(p.omega > 0.0)) throw parameter_error("omega must be positive");
    if (p.mu != 0 && p.mu != 1) throw parameter_error("mu must be 0 or 1");
}

double f_mu(double u, const ModelParams& p) {
    check_amplitude(u);
    const double z = u * u;
    return (std::expm1(kFourPi * z) - kFourPi * p.mu * z) * u;
}

double F_mu(double u, const ModelParams& p) {
    check_amplitude(u);
    const double z = u * u;
    return (std::expm1(kFourPi * z) - kFourPi * z - 8.0 * kPi * kPi * p.mu * z * z) /
           (8.0 * kPi);
}

double g_fun(double z, const ModelParams& p) {
    check_z(z);
    return std::expm1(kFourPi * z) - kFourPi * p.mu * z;
}

double g_prime(double z, const ModelParams& p) {
    check_z(z);
    return kFourPi * (std::exp(kFourPi * z) - p.mu);
}

double lplus_potential(double u, const ModelParams& p) {
    check_amplitude(u);
    const double z = u * u;
    return std::exp(kFourPi * z) * (8.0 * kPi * z + 1.0) - 1.0 - 12.0 * p.mu * kPi * z;
}

double chi_187(double x) {
    if (!(x >= 0.0)) throw parameter_error("chi_187: argument must be nonnegative");
    // chi(x) = 8 pi x^2 + 1/pi - 4x - e^{-4 pi x}/pi vanishes to second order
    // at 0 (leading term (32 pi^2/3) x^3), so the small-x branch sums the
    // series directly to keep the sign exact down to the underflow floor.
    if (x < 0.02) {
        const double t = kFourPi * x;
        double term = t * t * t / 6.0;  // k = 3
        double sum = term;
        for (int k = 4; k < 24; ++k) {
            term *= -t / k;
            sum += term;
            if (std::abs(term) < 1e-30 * std::abs(sum)) break;
        }
        return sum / kPi;
    }
    return 8.0 * kPi * x * x - 4.0 * x - std::expm1(-kFourPi * x) / kPi;
}

namespace {

FunctionalReport functionals_impl(std::span<const double> modulus, double grad_sq,
                                  const RadialGrid& g, const ModelParams& p,
                                  std::optional<double> action_ref) {
    validate(p);
    const int n = g.n;
    std::vector<double> mod2(n), bigF(n), uf(n);
    for (int j = 0; j < n; ++j) {
        const double a = modulus[j];
        mod2[j] = a * a;
        bigF[j] = F_mu(a, p);
        uf[j] = a * f_mu(a, p);
    }
    FunctionalReport rep;
    rep.mass = integrate(mod2, g);
    const double intF = integrate(bigF, g);
    const double intUF = integrate(uf, g);
    rep.energy = 0.5 * grad_sq - intF;
    rep.action = rep.energy + 0.5 * p.omega * rep.mass;
    rep.p_constraint = 0.5 * p.omega * rep.mass - intF;
    rep.virial_i = grad_sq + 2.0 * intF - intUF;
    if (!action_ref) {
        rep.kset = KSet::Undefined;
    } else if (rep.action < *action_ref && rep.virial_i < 0.0) {
        rep.kset = KSet::KMinus;
    } else if (rep.action < *action_ref && rep.virial_i > 0.0) {
        rep.kset = KSet::KPlus;
    } else {
        rep.kset = KSet::Neither;
    }
    return rep;
}

}  // namespace

FunctionalReport functionals(std::span<const double> values, const RadialGrid& g,
                             const ModelParams& p, std::optional<double> action_ref) {
    std::vector<double> modulus(values.size());
    for (size_t j = 0; j < values.size(); ++j) modulus[j] = std::abs(values[j]);
    return functionals_impl(modulus, grad_norm_sq(values, g), g, p, action_ref);
}

FunctionalReport functionals(std::span<const Complex> values, const RadialGrid& g,
                             const ModelParams& p, std::optional<double> action_ref) {
    std::vector<double> modulus(values.size());
    for (size_t j = 0; j < values.size(); ++j) modulus[j] = std::abs(values[j]);
    return functionals_impl(modulus, grad_norm_sq(values, g), g, p, action_ref);
}

}  // namespace expnls

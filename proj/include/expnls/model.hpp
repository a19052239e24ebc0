// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "expnls/grid.hpp"

namespace expnls {

// The two knobs of the model: frequency omega > 0 of the standing wave and
// the nonlinearity flag mu in {0,1} selecting which exponential variant is
// used, f_mu(u) = (e^{4 pi |u|^2} - 1 - 4 pi mu |u|^2) u.
struct ModelParams {
    double omega = 1.0;
    int mu = 0;
};

void validate(const ModelParams& p);

// Amplitudes beyond this cap signal an unphysical field; the pointwise
// nonlinearity refuses to evaluate there instead of returning infinities.
inline constexpr double kAmplitudeCap = 6.0;

double f_mu(double u, const ModelParams& p);
double F_mu(double u, const ModelParams& p);

// g(z) = e^{4 pi z} - 1 - 4 pi mu z with z = u^2, so that f_mu(u) = g(u^2) u.
double g_fun(double z, const ModelParams& p);
double g_prime(double z, const ModelParams& p);

// Zeroth-order coefficient of the second variation in the symmetric slot:
// 2 u^2 g'(u^2) + g(u^2) = e^{4 pi u^2}(8 pi u^2 + 1) - 1 - 12 mu pi u^2.
double lplus_potential(double u, const ModelParams& p);

// chi(x) = 8 pi x^2 + 1/pi - 4 x - e^{-4 pi x}/pi, nonnegative on x >= 0.
double chi_187(double x);

enum class KSet { KMinus, KPlus, Neither, Undefined };

struct FunctionalReport {
    double mass = 0.0;          // |u|_2^2
    double energy = 0.0;        // (1/2)|grad u|^2 - int F_mu(|u|)
    double action = 0.0;        // energy + (omega/2) mass
    double p_constraint = 0.0;  // (omega/2) mass - int F_mu(|u|)
    double virial_i = 0.0;      // |grad u|^2 + 2 int F_mu(|u|) - int |u| f_mu(|u|)
    KSet kset = KSet::Undefined;
};

// Scalar functionals of a radial field.  Complex fields enter the nonlinear
// integrals through their modulus; the gradient term uses the complex field
// itself.  K-set classification requires the reference action level of the
// soliton (action_ref); without it the kset is Undefined.
FunctionalReport functionals(std::span<const double> values, const RadialGrid& g,
                             const ModelParams& p,
                             std::optional<double> action_ref = std::nullopt);
FunctionalReport functionals(std::span<const Complex> values, const RadialGrid& g,
                             const ModelParams& p,
                             std::optional<double> action_ref = std::nullopt);

}  // namespace expnls

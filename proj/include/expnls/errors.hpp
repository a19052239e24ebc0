// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace expnls {

// Base class for all numerical-domain failures.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pointwise nonlinearity evaluated beyond the amplitude cap (unphysical field).
struct saturation_error : numeric_error {
    using numeric_error::numeric_error;
};

// Field/grid size mismatch.
struct dimension_error : numeric_error {
    using numeric_error::numeric_error;
};

// Invalid construction parameters (grid size, frequency, flags...).
struct parameter_error : numeric_error {
    using numeric_error::numeric_error;
};

// Amplitude continuation failed to bracket a sign change of the defect.
struct bracket_error : numeric_error {
    using numeric_error::numeric_error;
};

// Converged profile is not positive/monotone (not the ground state).
struct ground_state_error : numeric_error {
    using numeric_error::numeric_error;
};

// Tail-fit window empty or underflowed.
struct window_error : numeric_error {
    using numeric_error::numeric_error;
};

// Linear solve requested on a (near-)singular sector without a kernel guard.
struct conditioning_error : numeric_error {
    using numeric_error::numeric_error;
};

// Iterative eigenvalue extraction did not converge.
struct iteration_limit_error : numeric_error {
    using numeric_error::numeric_error;
};

// Morse-index sector cutoff reached while negative directions remain.
struct inconclusive_error : numeric_error {
    using numeric_error::numeric_error;
};

// No growing mode found where one was expected.
struct stability_error : numeric_error {
    using numeric_error::numeric_error;
};

// More than one growing mode detected.
struct multiplicity_error : numeric_error {
    using numeric_error::numeric_error;
};

// Evolution precondition violated (gradient norm at or above threshold).
struct threshold_error : numeric_error {
    using numeric_error::numeric_error;
};

// Too few trajectory samples for a finite-difference check.
struct sampling_error : numeric_error {
    using numeric_error::numeric_error;
};

// Growth-rate fit window never reached within the horizon.
struct horizon_error : numeric_error {
    using numeric_error::numeric_error;
};

// Instability-count bookkeeping received an inconsistent report.
struct verdict_error : numeric_error {
    using numeric_error::numeric_error;
};

}  // namespace expnls

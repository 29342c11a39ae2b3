#pragma once

#include <stdexcept>

namespace goefluct {

// A time with sigma(t) = 0 (e.g. t = 0 under fractional Brownian driving):
// rho and the limiting covariance are undefined there.
struct degenerate_time_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Repeated (or numerically indistinguishable) eigenvalues: the derivative
// formulas hold only on the simple-spectrum set, so these refuse instead of
// returning blown-up values.
struct degenerate_spectrum_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Tabulated covariance queried off its grid (lookup is exact, never
// interpolated).
struct off_grid_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Gram matrix not positive semidefinite even at the jitter cap.
struct not_positive_definite_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative eigensolver exceeded its sweep budget.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace goefluct

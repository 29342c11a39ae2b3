#pragma once

#include <string>
#include <vector>

#include "goefluct/errors.hpp"

namespace goefluct {

enum class CovKind { FractionalBrownian, Brownian, OrnsteinUhlenbeck, Tabulated };

// Covariance function R(s,t) of the i.i.d. driving Gaussian processes.
// Built-in kinds are exact analytic formulas:
//   fbm(H):  R(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2
//   bm:      R(s,t) = min(s,t)               (= fbm with H = 1/2)
//   ou(θ):   R(s,t) = exp(-θ|t-s|)           (stationary, unit variance)
// Tabulated kinds answer exact grid lookups only; off-grid queries throw.
// The built-ins satisfy the absolute-continuity and differentiability
// regularity hypotheses analytically; nothing is checked numerically.
class CovarianceModel {
  public:
    static CovarianceModel fractional_brownian(double hurst);
    static CovarianceModel brownian();
    static CovarianceModel ornstein_uhlenbeck(double theta);
    static CovarianceModel tabulated(std::vector<double> times,
                                     std::vector<std::vector<double>> matrix);

    double evaluate(double s, double t) const;
    double sigma(double t) const;

    // rho(s,t) = R(s,t) / (sigma(s) sigma(t)). Values in (1, 1+1e-12] are
    // clamped to 1 (rounding noise); anything larger means an invalid model.
    // Throws degenerate_time_error when either sigma vanishes.
    double rho(double s, double t) const;

    // dR/ds, analytic kinds only (a.e. value for Brownian at s = t).
    bool has_partial() const { return kind_ != CovKind::Tabulated; }
    double partial_s(double s, double t) const;

    CovKind kind() const { return kind_; }
    double hurst() const { return hurst_; }
    double theta() const { return theta_; }
    std::string describe() const;

  private:
    CovarianceModel() = default;

    CovKind kind_ = CovKind::Brownian;
    double hurst_ = 0.5;
    double theta_ = 1.0;
    std::vector<double> tab_times_;
    std::vector<double> tab_values_;  // row-major |times| x |times|

    std::size_t tab_index(double t) const;
};

// Strictly increasing finite nonnegative times.
struct TimeGrid {
    std::vector<double> times;

    explicit TimeGrid(std::vector<double> t);
    std::size_t size() const { return times.size(); }
};

struct JitterPolicy {
    double initial_scale = 1e-12;  // times the max Gram diagonal
    double growth = 10.0;
    int max_retries = 6;
};

// Lower-triangular L with L L^T = [R(t_i,t_j)]_{ij} + jitter_applied * I.
struct GramFactor {
    TimeGrid grid;
    std::vector<double> lower;  // row-major m x m, strict upper part zero
    double jitter_applied = 0.0;

    std::size_t size() const { return grid.size(); }
    double at(std::size_t i, std::size_t j) const {
        return lower[i * size() + j];
    }

    // out[i] = sum_{k<=i} L[i][k] xi[k] — one joint Gaussian draw across the
    // grid from i.i.d. standard normals xi.
    void apply(const double* xi, double* out) const;
};

// Cholesky of the Gram matrix, escalating jitter geometrically when the
// matrix is singular or indefinite; throws not_positive_definite_error at
// the cap. Single-point grids never need jitter.
GramFactor gram_factor(const CovarianceModel& model, const TimeGrid& grid,
                       const JitterPolicy& policy = {});

}  // namespace goefluct

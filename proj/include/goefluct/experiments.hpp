#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goefluct/covariance.hpp"
#include "goefluct/limit_cov.hpp"
#include "goefluct/test_function.hpp"

namespace goefluct {

// Monte Carlo experiment over the matrix process: replicas x test
// functions x grid times. Functions must be class-P certifiable
// (polynomial or approved built-in, enforced by TestFunction), grid times
// must have sigma > 0, and replicas >= 2.
struct ExperimentConfig {
    CovarianceModel model = CovarianceModel::brownian();
    int n = 2;
    TimeGrid grid{{1.0}};
    std::vector<TestFunction> functions;
    int replicas = 2;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ColumnKey {
    int function_index = 0;
    int time_index = 0;
    std::string function;
    double time = 0.0;
};

struct NormalityDiagnostics {
    double skewness = 0.0;
    double skewness_se = 0.0;
    double excess_kurtosis = 0.0;
    double excess_kurtosis_se = 0.0;
    // sup-distance between the empirical CDF and the normal fitted by
    // sample mean/variance. A proxy for the total-variation bound, which is
    // not estimable from samples without density assumptions.
    double kolmogorov = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

struct ExperimentReport {
    std::string model;
    int n = 0;
    int replicas = 0;
    std::uint64_t seed = 0;
    std::vector<ColumnKey> columns;          // C = |functions| x |grid|

    std::vector<double> sample_mean;         // per column, uncentered L mean
    std::vector<double> covariance;          // C x C row-major, of Z values
    std::vector<double> covariance_se;       // jackknife, C x C
    std::vector<double> theory_rcorrected;   // C x C series predictions
    std::vector<double> theory_paperliteral; // C x C
    std::vector<NormalityDiagnostics> diagnostics;  // per column

    // Sample covariance of each column's Z with the raw driving value
    // X_{1,1}(t) at the column's own time (asymptotic-independence proxy).
    std::vector<double> entry_cov;
    std::vector<double> entry_cov_se;

    std::vector<double> z_values;  // replicas x C row-major, centered
    double wall_seconds = 0.0;

    std::size_t column_count() const { return columns.size(); }
};

// Runs the experiment: per replica one sampled path, per column the linear
// eigenvalue statistic; Z centers by the cross-replica mean; covariance
// uses the unbiased (M-1) estimator; theory attached from the series route
// under both variants. Deterministic function of the config (replicas get
// derived seeds, aggregation is in replica order regardless of threads).
ExperimentReport run_fluctuation_experiment(const ExperimentConfig& config);

// Moment diagnostics with delete-1 jackknife standard errors; requires at
// least 100 samples and nonzero variance.
NormalityDiagnostics normality_diagnostics(std::span<const double> samples);

// Sample covariance of paired columns with its jackknife SE.
struct CovEstimate {
    double value = 0.0;
    double se = 0.0;
};
CovEstimate sample_covariance(std::span<const double> a,
                              std::span<const double> b);

struct ConvergenceRow {
    int n = 0;
    double sample_variance = 0.0;
    double theory_variance = 0.0;
    double abs_gap = 0.0;       // |sample variance - theory|
    double kolmogorov = 0.0;
    double kolmogorov_se = 0.0; // asymptotic null sd, 0.2603/sqrt(M)
};

// Per-n experiments (shared replica budget) for the first function/time
// column; n_list must be ascending with at least 3 entries.
std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base,
                                              std::span<const int> n_list);

// Non-increasing Kolmogorov distances up to slack_sigmas * combined SE.
bool kolmogorov_nonincreasing(std::span<const ConvergenceRow> rows,
                              double slack_sigmas = 2.0);

}  // namespace goefluct

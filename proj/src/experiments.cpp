#include "goefluct/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "goefluct/ensemble.hpp"
#include "goefluct/parallel.hpp"
#include "goefluct/spectral.hpp"

namespace goefluct {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865476); }

// sup |F_M - Phi(.; mean, sd)| over the sample points.
double kolmogorov_distance(std::vector<double> sorted, double mean, double sd) {
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double fx = normal_cdf((sorted[i] - mean) / sd);
        d = std::max(d, fx - static_cast<double>(i) / m);
        d = std::max(d, static_cast<double>(i + 1) / m - fx);
    }
    return d;
}

double jackknife_se(std::span<const double> pseudo) {
    const double m = static_cast<double>(pseudo.size());
    double mean = 0.0;
    for (double v : pseudo) mean += v;
    mean /= m;
    double acc = 0.0;
    for (double v : pseudo) acc += (v - mean) * (v - mean);
    return std::sqrt((m - 1.0) / m * acc);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (replicas < 2) throw std::invalid_argument("config: replicas must be >= 2");
    if (functions.empty()) {
        throw std::invalid_argument("config: at least one test function");
    }
    for (double t : grid.times) {
        if (!(model.sigma(t) > 0.0)) {
            throw degenerate_time_error(
                "config: grid contains a time with sigma = 0 (drop t = 0 for "
                "fbm/bm driving)");
        }
    }
}

CovEstimate sample_covariance(std::span<const double> a,
                              std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("sample_covariance: need paired samples, >= 2");
    }
    const std::size_t m = a.size();
    const double dm = static_cast<double>(m);
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= dm;
    mean_b /= dm;
    double s_uv = 0.0;
    std::vector<double> u(m), v(m);
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = a[i] - mean_a;
        v[i] = b[i] - mean_b;
        s_uv += u[i] * v[i];
    }
    CovEstimate est;
    est.value = s_uv / (dm - 1.0);
    if (m == 2) {
        est.se = std::fabs(est.value);  // jackknife degenerates; report scale
        return est;
    }
    // Delete-1 covariance from centered sums: removing i shifts both means
    // by -u_i/(m-1), -v_i/(m-1).
    std::vector<double> pseudo(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t_uv = s_uv - u[i] * v[i];
        pseudo[i] = (t_uv - u[i] * v[i] / (dm - 1.0)) / (dm - 2.0);
    }
    est.se = jackknife_se(pseudo);
    return est;
}

NormalityDiagnostics normality_diagnostics(std::span<const double> samples) {
    const std::size_t m = samples.size();
    if (m < 100) {
        throw std::invalid_argument("normality diagnostics need >= 100 samples");
    }
    const double dm = static_cast<double>(m);
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= dm;

    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] = samples[i] - mean;
        const double y2 = y[i] * y[i];
        s2 += y2;
        s3 += y2 * y[i];
        s4 += y2 * y2;
    }
    if (!(s2 > 0.0)) {
        throw std::invalid_argument("normality diagnostics: zero variance");
    }

    auto moments_stat = [](double t2, double t3, double t4, double mu,
                           double count, double* skew, double* kurt) {
        const double m2 = t2 / count - mu * mu;
        const double m3 = (t3 - 3.0 * mu * t2) / count + 2.0 * mu * mu * mu;
        const double m4 = (t4 - 4.0 * mu * t3 + 6.0 * mu * mu * t2) / count -
                          3.0 * mu * mu * mu * mu;
        *skew = m3 / std::pow(m2, 1.5);
        *kurt = m4 / (m2 * m2) - 3.0;
    };

    NormalityDiagnostics out;
    out.mean = mean;
    out.variance = s2 / (dm - 1.0);
    moments_stat(s2, s3, s4, 0.0, dm, &out.skewness, &out.excess_kurtosis);

    std::vector<double> pseudo_skew(m), pseudo_kurt(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double yi = y[i];
        const double t2 = s2 - yi * yi;
        const double t3 = s3 - yi * yi * yi;
        const double t4 = s4 - yi * yi * yi * yi;
        const double mu = -yi / (dm - 1.0);
        moments_stat(t2, t3, t4, mu, dm - 1.0, &pseudo_skew[i], &pseudo_kurt[i]);
    }
    out.skewness_se = jackknife_se(pseudo_skew);
    out.excess_kurtosis_se = jackknife_se(pseudo_kurt);
    out.kolmogorov = kolmogorov_distance(y, 0.0, std::sqrt(out.variance));
    return out;
}

ExperimentReport run_fluctuation_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const std::size_t nt = config.grid.size();
    const std::size_t nf = config.functions.size();
    const std::size_t nc = nf * nt;
    const std::size_t m = static_cast<std::size_t>(config.replicas);

    ExperimentReport report;
    report.model = config.model.describe();
    report.n = config.n;
    report.replicas = config.replicas;
    report.seed = config.seed;
    for (std::size_t fi = 0; fi < nf; ++fi) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
            report.columns.push_back({static_cast<int>(fi), static_cast<int>(ti),
                                      config.functions[fi].describe(),
                                      config.grid.times[ti]});
        }
    }

    // One Gram factor shared across replicas and entries.
    const GramFactor factor = gram_factor(config.model, config.grid);
    std::vector<double> stats(m * nc);
    std::vector<double> entry_path(m * nt);  // raw X_{1,1}(t) per replica
    const double sqrt_n = std::sqrt(static_cast<double>(config.n));

    parallel_for(0, m, [&](std::size_t r) {
        const GoePath path = sample_goe_path(config.model, config.n, factor,
                                             config.seed, r);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            const std::vector<double> eigs = eigenvalues_only(path.matrices[ti]);
            for (std::size_t fi = 0; fi < nf; ++fi) {
                stats[r * nc + fi * nt + ti] =
                    linear_statistic(std::span<const double>(eigs),
                                     config.functions[fi]);
            }
            entry_path[r * nt + ti] = path.matrices[ti].coeffs[0] * sqrt_n;
        }
    });

    // Center by cross-replica means (the finite-n expectation has no closed
    // form); covariances and diagnostics run on the centered values.
    report.sample_mean.assign(nc, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < nc; ++c) report.sample_mean[c] += stats[r * nc + c];
    }
    for (std::size_t c = 0; c < nc; ++c) {
        report.sample_mean[c] /= static_cast<double>(m);
    }
    report.z_values.assign(m * nc, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            report.z_values[r * nc + c] = stats[r * nc + c] - report.sample_mean[c];
        }
    }

    std::vector<double> col_a(m), col_b(m);
    auto column = [&](std::size_t c, std::vector<double>& into) {
        for (std::size_t r = 0; r < m; ++r) into[r] = report.z_values[r * nc + c];
    };

    report.covariance.assign(nc * nc, 0.0);
    report.covariance_se.assign(nc * nc, 0.0);
    for (std::size_t ca = 0; ca < nc; ++ca) {
        column(ca, col_a);
        for (std::size_t cb = ca; cb < nc; ++cb) {
            column(cb, col_b);
            const CovEstimate est = sample_covariance(col_a, col_b);
            report.covariance[ca * nc + cb] = est.value;
            report.covariance[cb * nc + ca] = est.value;
            report.covariance_se[ca * nc + cb] = est.se;
            report.covariance_se[cb * nc + ca] = est.se;
        }
    }

    report.theory_rcorrected.assign(nc * nc, 0.0);
    report.theory_paperliteral.assign(nc * nc, 0.0);
    for (std::size_t ca = 0; ca < nc; ++ca) {
        for (std::size_t cb = 0; cb < nc; ++cb) {
            const auto& ka = report.columns[ca];
            const auto& kb = report.columns[cb];
            SeriesCovOptions rc;
            rc.variant = CovVariant::RCorrected;
            SeriesCovOptions pl;
            pl.variant = CovVariant::PaperLiteral;
            report.theory_rcorrected[ca * nc + cb] = limiting_cov_series(
                config.functions[ka.function_index],
                config.functions[kb.function_index], config.model, ka.time,
                kb.time, rc);
            report.theory_paperliteral[ca * nc + cb] = limiting_cov_series(
                config.functions[ka.function_index],
                config.functions[kb.function_index], config.model, ka.time,
                kb.time, pl);
        }
    }

    report.diagnostics.resize(nc);
    if (m >= 100) {
        for (std::size_t c = 0; c < nc; ++c) {
            column(c, col_a);
            report.diagnostics[c] = normality_diagnostics(col_a);
        }
    }

    report.entry_cov.assign(nc, 0.0);
    report.entry_cov_se.assign(nc, 0.0);
    std::vector<double> x11(m);
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t ti = static_cast<std::size_t>(report.columns[c].time_index);
        for (std::size_t r = 0; r < m; ++r) x11[r] = entry_path[r * nt + ti];
        column(c, col_a);
        const CovEstimate est = sample_covariance(col_a, x11);
        report.entry_cov[c] = est.value;
        report.entry_cov_se[c] = est.se;
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return report;
}

std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base,
                                              std::span<const int> n_list) {
    if (n_list.size() < 3) {
        throw std::invalid_argument("convergence study needs >= 3 dimensions");
    }
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw std::invalid_argument("convergence study: n_list must ascend");
        }
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        ExperimentConfig config = base;
        config.n = n_list[i];
        // Distinct sub-seed per dimension so studies do not share draws.
        config.seed = base.seed + 0x9E37u * (i + 1);
        const ExperimentReport rep = run_fluctuation_experiment(config);
        ConvergenceRow row;
        row.n = n_list[i];
        row.sample_variance = rep.covariance[0];
        row.theory_variance = rep.theory_rcorrected[0];
        row.abs_gap = std::fabs(row.sample_variance - row.theory_variance);
        row.kolmogorov = rep.diagnostics.empty() ? 0.0 : rep.diagnostics[0].kolmogorov;
        row.kolmogorov_se =
            0.2603 / std::sqrt(static_cast<double>(config.replicas));
        rows.push_back(row);
    }
    return rows;
}

bool kolmogorov_nonincreasing(std::span<const ConvergenceRow> rows,
                              double slack_sigmas) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double slack =
            slack_sigmas * std::hypot(rows[i - 1].kolmogorov_se,
                                      rows[i].kolmogorov_se);
        if (rows[i].kolmogorov > rows[i - 1].kolmogorov + slack) return false;
    }
    return true;
}

}  // namespace goefluct

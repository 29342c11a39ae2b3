// goe-fluct: simulate | covariance | verify | experiment
//
// Exit codes: 0 success, 1 failed verification checks, 2 malformed
// config/arguments, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "goefluct/config.hpp"
#include "goefluct/ensemble.hpp"
#include "goefluct/errors.hpp"
#include "goefluct/experiments.hpp"
#include "goefluct/io.hpp"
#include "goefluct/limit_cov.hpp"
#include "goefluct/parallel.hpp"
#include "goefluct/rng.hpp"
#include "goefluct/spectral.hpp"

using nlohmann::json;
using namespace goefluct;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

// Model shorthand for one-shot queries: bm | fbm:0.75 | ou:1.0 | raw JSON.
CovarianceModel parse_model_arg(const std::string& text) {
    if (!text.empty() && text.front() == '{') return model_from_json_text(text);
    if (text == "bm") return CovarianceModel::brownian();
    if (text.rfind("fbm:", 0) == 0) {
        return CovarianceModel::fractional_brownian(std::stod(text.substr(4)));
    }
    if (text.rfind("ou:", 0) == 0) {
        return CovarianceModel::ornstein_uhlenbeck(std::stod(text.substr(3)));
    }
    throw std::invalid_argument(
        "model must be bm, fbm:<H>, ou:<theta>, or a JSON object");
}

// Chebyshev-U polynomials as explicit coefficient lists, for verify suites.
std::vector<TestFunction> chebyshev_u_functions(int max_degree) {
    std::vector<TestFunction> u;
    std::vector<double> prev = {1.0}, cur = {0.0, 1.0};
    u.push_back(TestFunction::polynomial(prev));
    if (max_degree >= 1) u.push_back(TestFunction::polynomial(cur));
    for (int q = 2; q <= max_degree; ++q) {
        std::vector<double> next(q + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = cur;
        cur = next;
        u.push_back(TestFunction::polynomial(next));
    }
    return u;
}

// Writes outputs through one place so the manifest can digest them; the
// manifest itself carries the timestamps and is not part of the
// byte-reproducibility contract (report/CSV files are).
struct ManifestWriter {
    std::string command;
    std::string config_echo;
    std::uint64_t seed = 0;
    std::string started = utc_now();
    std::vector<std::pair<std::string, std::string>> outputs;

    void add(const std::filesystem::path& dir, const std::string& name,
             const std::string& content) {
        write_text_file((dir / name).string(), content);
        outputs.emplace_back(name, content);
    }

    void finish(const std::filesystem::path& dir, double wall_seconds) {
        json m;
        m["artifact_version"] = kVersion;
        m["command"] = command;
        m["config_echo"] = config_echo;
        m["seed"] = seed;
        m["started_utc"] = started;
        m["finished_utc"] = utc_now();
        m["wall_seconds"] = wall_seconds;
        m["outputs"] = json::array();
        for (const auto& [name, content] : outputs) {
            m["outputs"].push_back({{"path", name},
                                    {"fnv1a64", fnv1a64_hex(content)},
                                    {"bytes", content.size()}});
        }
        write_text_file((dir / "manifest.json").string(), m.dump(2) + "\n");
    }
};

std::string read_config_text(const std::string& path) {
    try {
        return read_text_file(path);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what());  // unreadable config: exit 2
    }
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const std::string raw = read_config_text(config_path);
    const ExperimentConfig config = parse_experiment_config(raw);
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t nt = config.grid.size();
    const std::size_t nf = config.functions.size();
    const std::size_t m = static_cast<std::size_t>(config.replicas);
    const std::size_t n = static_cast<std::size_t>(config.n);

    const GramFactor factor = gram_factor(config.model, config.grid);
    std::vector<double> eigs_store(m * nt * n);
    std::vector<double> stats_store(m * nt * nf);
    parallel_for(0, m, [&](std::size_t r) {
        const GoePath path =
            sample_goe_path(config.model, config.n, factor, config.seed, r);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            const std::vector<double> eigs = eigenvalues_only(path.matrices[ti]);
            for (std::size_t i = 0; i < n; ++i) {
                eigs_store[(r * nt + ti) * n + i] = eigs[i];
            }
            for (std::size_t fi = 0; fi < nf; ++fi) {
                stats_store[(r * nt + ti) * nf + fi] = linear_statistic(
                    std::span<const double>(eigs), config.functions[fi]);
            }
        }
    });

    std::string eig_csv;
    {
        std::vector<std::string> header = {"replica", "time"};
        for (std::size_t i = 1; i <= n; ++i) {
            char buf[24];
            std::snprintf(buf, sizeof(buf), "lambda_%03zu", i);
            header.push_back(buf);
        }
        eig_csv += csv_row(header);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t ti = 0; ti < nt; ++ti) {
                std::vector<std::string> row = {
                    std::to_string(r), format_double(config.grid.times[ti])};
                for (std::size_t i = 0; i < n; ++i) {
                    row.push_back(format_double(eigs_store[(r * nt + ti) * n + i]));
                }
                eig_csv += csv_row(row);
            }
        }
    }
    std::string stat_csv;
    {
        std::vector<std::string> header = {"replica", "time"};
        for (const auto& f : config.functions) header.push_back(f.describe());
        stat_csv += csv_row(header);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t ti = 0; ti < nt; ++ti) {
                std::vector<std::string> row = {
                    std::to_string(r), format_double(config.grid.times[ti])};
                for (std::size_t fi = 0; fi < nf; ++fi) {
                    row.push_back(
                        format_double(stats_store[(r * nt + ti) * nf + fi]));
                }
                stat_csv += csv_row(row);
            }
        }
    }

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    ManifestWriter manifest{"simulate", raw, config.seed, utc_now(), {}};
    manifest.add(dir, "eigenvalues.csv", eig_csv);
    manifest.add(dir, "statistics.csv", stat_csv);
    manifest.finish(dir, std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count());
    std::cout << "simulate: wrote " << (dir / "eigenvalues.csv").string()
              << ", " << (dir / "statistics.csv").string() << "\n";
    return 0;
}

json report_to_json(const ExperimentReport& rep) {
    json j;
    j["model"] = rep.model;
    j["n"] = rep.n;
    j["replicas"] = rep.replicas;
    j["seed"] = rep.seed;
    j["columns"] = json::array();
    for (const auto& c : rep.columns) {
        j["columns"].push_back({{"function", c.function}, {"time", c.time}});
    }
    const std::size_t nc = rep.column_count();
    auto matrix = [&](const std::vector<double>& flat) {
        json rows = json::array();
        for (std::size_t a = 0; a < nc; ++a) {
            json row = json::array();
            for (std::size_t b = 0; b < nc; ++b) row.push_back(flat[a * nc + b]);
            rows.push_back(row);
        }
        return rows;
    };
    j["sample_mean"] = rep.sample_mean;
    j["covariance"] = matrix(rep.covariance);
    j["covariance_se"] = matrix(rep.covariance_se);
    j["theory"] = {{"rcorrected", matrix(rep.theory_rcorrected)},
                   {"paperliteral", matrix(rep.theory_paperliteral)}};
    j["diagnostics"] = json::array();
    if (rep.replicas >= 100) {  // below that the harness leaves them unset
        for (const auto& d : rep.diagnostics) {
            j["diagnostics"].push_back(
                {{"skewness", d.skewness},
                 {"skewness_se", d.skewness_se},
                 {"excess_kurtosis", d.excess_kurtosis},
                 {"excess_kurtosis_se", d.excess_kurtosis_se},
                 {"kolmogorov_to_fitted_normal", d.kolmogorov},
                 {"mean", d.mean},
                 {"variance", d.variance}});
        }
    }
    j["entry_path_cov"] = rep.entry_cov;
    j["entry_path_cov_se"] = rep.entry_cov_se;
    return j;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
    const std::string raw = read_config_text(config_path);
    const ExperimentConfig config = parse_experiment_config(raw);
    const ExperimentReport rep = run_fluctuation_experiment(config);

    std::string csv;
    {
        std::vector<std::string> header = {"replica"};
        for (const auto& c : rep.columns) {
            header.push_back("Z[" + c.function + "]@" + format_double_short(c.time));
        }
        csv += csv_row(header);
        const std::size_t nc = rep.column_count();
        for (int r = 0; r < rep.replicas; ++r) {
            std::vector<std::string> row = {std::to_string(r)};
            for (std::size_t c = 0; c < nc; ++c) {
                row.push_back(format_double(
                    rep.z_values[static_cast<std::size_t>(r) * nc + c]));
            }
            csv += csv_row(row);
        }
    }

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    ManifestWriter manifest{"experiment", raw, config.seed, utc_now(), {}};
    manifest.add(dir, "report.json", report_to_json(rep).dump(2) + "\n");
    manifest.add(dir, "replicas.csv", csv);
    manifest.finish(dir, rep.wall_seconds);

    const std::size_t nc = rep.column_count();
    std::cout << "experiment: model=" << rep.model << " n=" << rep.n
              << " replicas=" << rep.replicas << "\n";
    std::printf("%-20s %-20s %12s %12s %12s %12s\n", "column a", "column b",
                "mc cov", "se", "rcorrected", "paperliteral");
    for (std::size_t a = 0; a < nc; ++a) {
        for (std::size_t b = a; b < nc; ++b) {
            const std::string ca = rep.columns[a].function + "@" +
                                   format_double_short(rep.columns[a].time);
            const std::string cb = rep.columns[b].function + "@" +
                                   format_double_short(rep.columns[b].time);
            std::printf("%-20s %-20s %12.6f %12.6f %12.6f %12.6f\n", ca.c_str(),
                        cb.c_str(), rep.covariance[a * nc + b],
                        rep.covariance_se[a * nc + b],
                        rep.theory_rcorrected[a * nc + b],
                        rep.theory_paperliteral[a * nc + b]);
        }
    }
    std::cout << "wrote " << (dir / "report.json").string() << "\n";
    return 0;
}

int cmd_covariance(const std::string& f_text, const std::string& g_text,
                   const std::string& model_text, double s, double t,
                   const std::string& route, int m, bool as_json) {
    const TestFunction f = TestFunction::parse(f_text);
    const TestFunction g = TestFunction::parse(g_text);
    const CovarianceModel model = parse_model_arg(model_text);
    if (route != "series" && route != "quadrature" && route != "both") {
        throw std::invalid_argument("route must be series, quadrature, or both");
    }

    const double sigma_s = model.sigma(s);
    const double sigma_t = model.sigma(t);
    const double rho = model.rho(s, t);

    json out;
    out["f"] = f.describe();
    out["g"] = g.describe();
    out["model"] = model.describe();
    out["s"] = s;
    out["t"] = t;
    out["sigma_s"] = sigma_s;
    out["sigma_t"] = sigma_t;
    out["rho"] = rho;
    out["R"] = model.evaluate(s, t);

    if (route != "quadrature") {
        SeriesCovOptions rc, pl;
        pl.variant = CovVariant::PaperLiteral;
        out["series"] = {
            {"rcorrected", limiting_cov_series(f, g, model, s, t, rc)},
            {"paperliteral", limiting_cov_series(f, g, model, s, t, pl)}};
    }
    if (route != "series") {
        auto run_quad = [&](CovVariant variant, DensityNormalization norm) {
            QuadratureCovOptions opts;
            opts.variant = variant;
            opts.normalization = norm;
            opts.m = m;
            return limiting_cov_quadrature(f, g, model, s, t, opts);
        };
        try {
            out["quadrature"] = {
                {"rcorrected_proof", run_quad(CovVariant::RCorrected,
                                              DensityNormalization::ProofConsistent)},
                {"paperliteral_proof",
                 run_quad(CovVariant::PaperLiteral,
                          DensityNormalization::ProofConsistent)},
                {"rcorrected_theorem",
                 run_quad(CovVariant::RCorrected,
                          DensityNormalization::TheoremStated)}};
        } catch (const std::domain_error&) {
            if (route == "quadrature") throw;  // forced route: numeric failure
            out["quadrature"] = {{"refused", "rho too close to 1; series route only"}};
        }
    }

    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("limiting covariance  f=%s g=%s model=%s s=%s t=%s\n",
                out["f"].get<std::string>().c_str(),
                out["g"].get<std::string>().c_str(),
                out["model"].get<std::string>().c_str(),
                format_double_short(s).c_str(), format_double_short(t).c_str());
    std::printf("  sigma_s=%.12g sigma_t=%.12g rho=%.12g R=%.12g\n", sigma_s,
                sigma_t, rho, out["R"].get<double>());
    if (out.contains("series")) {
        std::printf("  %-34s %.12g\n",
                    "series, RCorrected:", out["series"]["rcorrected"].get<double>());
        std::printf("  %-34s %.12g\n", "series, PaperLiteral:",
                    out["series"]["paperliteral"].get<double>());
    }
    if (out.contains("quadrature")) {
        if (out["quadrature"].contains("refused")) {
            std::printf("  quadrature: refused (%s)\n",
                        out["quadrature"]["refused"].get<std::string>().c_str());
        } else {
            std::printf("  %-34s %.12g\n", "quadrature, RCorrected/Proof:",
                        out["quadrature"]["rcorrected_proof"].get<double>());
            std::printf("  %-34s %.12g\n", "quadrature, PaperLiteral/Proof:",
                        out["quadrature"]["paperliteral_proof"].get<double>());
            std::printf("  %-34s %.12g\n", "quadrature, RCorrected/Theorem:",
                        out["quadrature"]["rcorrected_theorem"].get<double>());
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify suites: fixed seeds, one PASS/FAIL line per check.

struct Verifier {
    int failures = 0;

    void check(const std::string& name, bool ok, double measured,
               double threshold) {
        std::printf("%-52s %s  (measured %.3e, limit %.3e)\n", name.c_str(),
                    ok ? "PASS" : "FAIL", measured, threshold);
        if (!ok) ++failures;
    }
};

int verify_kernel() {
    Verifier v;
    double min_val = 1e300;
    for (int iz = 0; iz < 20; ++iz) {
        const double z = 0.99 * iz / 19.0;
        for (int ix = 0; ix < 200; ++ix) {
            const double x = -1.99 + 3.98 * ix / 199.0;
            for (int iy = 0; iy < 200; ++iy) {
                const double y = -1.99 + 3.98 * iy / 199.0;
                min_val = std::min(min_val, kernel_closed(z, x, y));
            }
        }
    }
    v.check("kernel positivity on 200x200x20 grid", min_val > 0.0, min_val, 0.0);

    rng::Stream stream{rng::stream_key(77, 0, 0)};
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const double z = 0.99 * stream.next_uniform();
        const double x = -1.99 + 3.98 * stream.next_uniform();
        const double y = -1.99 + 3.98 * stream.next_uniform();
        const int q = kernel_series_terms_for(z, x, y, 1e-9);
        const double diff =
            std::fabs(kernel_series(z, x, y, q) - kernel_closed(z, x, y));
        const double bound = kernel_series_tail_bound(z, x, y, q) +
                             1e-10 * (1.0 + kernel_closed(z, x, y));
        worst = std::max(worst, diff / bound);
    }
    v.check("series vs closed form within tail bound (1e4)", worst <= 1.0,
            worst, 1.0);

    const auto u = chebyshev_u_functions(8);
    double worst_orth = 0.0;
    for (double z : {0.0, 0.3, 0.9}) {
        for (int p = 0; p <= 8; ++p) {
            for (int q = p; q <= 8; ++q) {
                const double got =
                    semicircular_pair_expectation(u[p], u[q], z, 200);
                const double want = (p == q) ? std::pow(z, p) : 0.0;
                worst_orth = std::max(worst_orth, std::fabs(got - want));
            }
        }
    }
    v.check("pair expectation orthonormality (p,q<=8)", worst_orth <= 1e-10,
            worst_orth, 1e-10);

    const auto fbm = CovarianceModel::fractional_brownian(0.7);
    const TestFunction f3 = TestFunction::monomial(3);
    const TestFunction f2 = TestFunction::monomial(2);
    const double a = limiting_cov_series(f3, f2, fbm, 0.5, 1.0);
    const double b = limiting_cov_quadrature(f3, f2, fbm, 0.5, 1.0);
    v.check("series/quadrature route equivalence", std::fabs(a - b) <= 1e-6,
            std::fabs(a - b), 1e-6);

    const TestFunction fx = TestFunction::monomial(1);
    const auto bm = CovarianceModel::brownian();
    const double oracle1 = limiting_cov_series(fx, fx, bm, 1.0, 1.0);
    v.check("trace-variance oracle (f=g=x)", std::fabs(oracle1 - 2.0) <= 1e-10,
            std::fabs(oracle1 - 2.0), 1e-10);
    const double oracle2 = limiting_cov_series(f2, f2, bm, 1.0, 1.0);
    v.check("trace-variance oracle (f=g=x^2)",
            std::fabs(oracle2 - 4.0) <= 1e-10, std::fabs(oracle2 - 4.0), 1e-10);
    return v.failures == 0 ? 0 : 1;
}

int verify_derivatives() {
    Verifier v;
    double worst_grad = 0.0, worst_hess = 0.0, worst_vid = 0.0;
    double worst_orth = 0.0, worst_psi = 0.0;

    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const int n = 3 + static_cast<int>(rep % 6);
        const PackedSymmetric m = sample_standard_goe(n, 4100 + rep);
        const auto d = eigen_decompose(m);

        for (int i1 = 0; i1 < n; ++i1) {
            for (int j1 = 0; j1 < n; ++j1) {
                const auto v1 = v_coupling(d, i1, j1);
                double self = 0.0;
                for (double x : v1) self += x * x;
                const double want = 1.0 + (i1 == j1 ? 1.0 : 0.0);
                worst_vid = std::max(worst_vid, std::fabs(self - want));
            }
        }
        for (int i1 = 0; i1 < n; ++i1) {
            const auto g1 = grad_eigenvalue(d, i1);
            for (int i2 = 0; i2 < n; ++i2) {
                const auto g2 = grad_eigenvalue(d, i2);
                double acc = 0.0;
                for (std::size_t idx = 0; idx < g1.size(); ++idx) {
                    acc += g1[idx] * g2[idx];
                }
                worst_orth =
                    std::max(worst_orth, std::fabs(acc - (i1 == i2 ? 2.0 : 0.0)));
            }
        }
        const TestFunction f2 = TestFunction::monomial(2);
        const auto fn = psi_pi_functionals(d, f2);
        double sum_f2 = 0.0;
        for (double lambda : d.eigenvalues) sum_f2 += std::pow(lambda, 4);
        double psi1_sq = 0.0;
        for (double x : fn.psi1) psi1_sq += x * x;
        worst_psi = std::max(
            worst_psi, std::fabs(psi1_sq - 2.0 * sum_f2) / std::max(1.0, sum_f2));
    }
    v.check("V-coupling self identity", worst_vid <= 1e-10, worst_vid, 1e-10);
    v.check("gradient orthogonality 2*delta", worst_orth <= 1e-10, worst_orth,
            1e-10);
    v.check("psi1 isometry", worst_psi <= 1e-9, worst_psi, 1e-9);

    for (std::uint64_t rep = 0; rep < 8; ++rep) {
        const int n = 3 + static_cast<int>(rep % 4);
        // A spread diagonal keeps every gap around 1 so finite differences
        // have room.
        PackedSymmetric m = sample_standard_goe(n, 8800 + rep);
        for (int i = 0; i < n; ++i) {
            m.at(i, i) += (i + 1.0) * 1.2 / std::sqrt(2.0);
        }
        const auto d = eigen_decompose(m);
        const int dim = PackedSymmetric::packed_dim(n);
        for (int i = 0; i < n; ++i) {
            const auto grad = grad_eigenvalue(d, i);
            double gmax = 0.0, gdiff = 0.0;
            for (int a = 0; a < dim; ++a) {
                PackedSymmetric plus = m, minus = m;
                plus.coeffs[a] += 1e-5;
                minus.coeffs[a] -= 1e-5;
                const double fd =
                    (eigenvalues_only(plus)[i] - eigenvalues_only(minus)[i]) /
                    2e-5;
                gmax = std::max(gmax, std::fabs(grad[a]));
                gdiff = std::max(gdiff, std::fabs(grad[a] - fd));
            }
            worst_grad = std::max(worst_grad, gdiff / gmax);
        }
        const auto hess = hess_eigenvalue(d, 0);
        double hmax = 0.0;
        for (double x : hess) hmax = std::max(hmax, std::fabs(x));
        const double h = 2e-4;
        const double center = eigenvalues_only(m)[0];
        double hdiff = 0.0;
        for (int a = 0; a < dim; ++a) {
            for (int b = a; b < dim; ++b) {
                double fd;
                if (a == b) {
                    PackedSymmetric p = m, q = m;
                    p.coeffs[a] += h;
                    q.coeffs[a] -= h;
                    fd = (eigenvalues_only(p)[0] - 2.0 * center +
                          eigenvalues_only(q)[0]) /
                         (h * h);
                } else {
                    PackedSymmetric pp = m, pm = m, mp = m, mm = m;
                    pp.coeffs[a] += h;
                    pp.coeffs[b] += h;
                    pm.coeffs[a] += h;
                    pm.coeffs[b] -= h;
                    mp.coeffs[a] -= h;
                    mp.coeffs[b] += h;
                    mm.coeffs[a] -= h;
                    mm.coeffs[b] -= h;
                    fd = (eigenvalues_only(pp)[0] - eigenvalues_only(pm)[0] -
                          eigenvalues_only(mp)[0] + eigenvalues_only(mm)[0]) /
                         (4.0 * h * h);
                }
                hdiff = std::max(hdiff, std::fabs(hess[a * dim + b] - fd));
            }
        }
        worst_hess = std::max(worst_hess, hdiff / hmax);
    }
    v.check("gradient vs finite differences", worst_grad <= 1e-6, worst_grad,
            1e-6);
    v.check("hessian vs finite differences", worst_hess <= 1e-4, worst_hess,
            1e-4);
    return v.failures == 0 ? 0 : 1;
}

int verify_quadrature() {
    Verifier v;
    double worst_w = 0.0;
    for (int m = 1; m <= 512; m = m < 8 ? m + 1 : m * 2) {
        const SemicircleQuadrature q = semicircle_quadrature(m);
        double sum = 0.0;
        for (double w : q.weights) sum += w;
        worst_w = std::max(worst_w, std::fabs(sum - 1.0));
    }
    v.check("weight sums = 1 (m up to 512)", worst_w <= 1e-14, worst_w, 1e-14);

    const SemicircleQuadrature q = semicircle_quadrature(200);
    double worst_m = 0.0;
    for (int k : {2, 4, 6, 8}) {
        double acc = 0.0;
        for (int j = 0; j < q.m; ++j) {
            acc += q.weights[j] * std::pow(q.nodes[j], k);
        }
        worst_m = std::max(worst_m, std::fabs(acc - semicircle_moment(k)));
    }
    v.check("Catalan moments m2,m4,m6,m8 at m=200", worst_m <= 1e-12, worst_m,
            1e-12);

    const GaussLegendre gl = gauss_legendre_01(64);
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) acc += gl.weights[i] * std::pow(gl.nodes[i], 9);
    v.check("Gauss-Legendre degree-9 exactness", std::fabs(acc - 0.1) <= 1e-14,
            std::fabs(acc - 0.1), 1e-14);
    return v.failures == 0 ? 0 : 1;
}

int verify_ensemble() {
    Verifier v;
    const auto bm = CovarianceModel::brownian();
    const TimeGrid grid({1.0});
    {
        const GoePath a = sample_goe_path(bm, 6, TimeGrid({0.5, 1.0}), 5, 1);
        const GoePath b = sample_goe_path(bm, 6, TimeGrid({0.5, 1.0}), 5, 1);
        bool same = true;
        for (std::size_t t = 0; t < 2; ++t) {
            for (std::size_t e = 0; e < a.matrices[t].coeffs.size(); ++e) {
                same = same && a.matrices[t].coeffs[e] == b.matrices[t].coeffs[e];
            }
        }
        v.check("determinism: identical bits for identical inputs", same,
                same ? 0.0 : 1.0, 0.5);
    }
    {
        const int m = 40000;
        double sum2 = 0.0;
        for (int r = 0; r < m; ++r) {
            const GoePath p = sample_goe_path(bm, 1, grid, 4242, r);
            sum2 += p.matrices[0].entry(0, 0) * p.matrices[0].entry(0, 0);
        }
        const double var = sum2 / m;
        v.check("n=1 realized variance = 2", std::fabs(var - 2.0) <= 0.06,
                std::fabs(var - 2.0), 0.06);
    }
    {
        const int n = 4, m = 40000;
        double off = 0.0, diag = 0.0;
        for (int r = 0; r < m; ++r) {
            const PackedSymmetric p = sample_standard_goe(n, 31337, r);
            off += p.entry(0, 1) * p.entry(0, 1);
            diag += p.entry(1, 1) * p.entry(1, 1);
        }
        v.check("standard GOE off-diagonal variance = 1/n",
                std::fabs(off / m - 0.25) <= 0.01, std::fabs(off / m - 0.25),
                0.01);
        v.check("standard GOE diagonal variance = 2/n",
                std::fabs(diag / m - 0.5) <= 0.02, std::fabs(diag / m - 0.5),
                0.02);
    }
    {
        const int n = 3, m = 40000;
        double c = 0.0, va = 0.0, vb = 0.0;
        for (int r = 0; r < m; ++r) {
            auto [a, b] = sample_correlated_goe_pair(n, 0.6, 1234, r);
            c += a.entry(0, 1) * b.entry(0, 1);
            va += a.entry(0, 1) * a.entry(0, 1);
            vb += b.entry(0, 1) * b.entry(0, 1);
        }
        const double corr = c / std::sqrt(va * vb);
        v.check("correlated pair z=0.6 sample correlation",
                std::fabs(corr - 0.6) <= 0.01, std::fabs(corr - 0.6), 0.01);
    }
    return v.failures == 0 ? 0 : 1;
}

int cmd_verify(const std::string& suite) {
    if (suite == "kernel") return verify_kernel();
    if (suite == "derivatives") return verify_derivatives();
    if (suite == "quadrature") return verify_quadrature();
    if (suite == "ensemble") return verify_ensemble();
    std::cerr << "unknown verify suite: " << suite
              << " (expected kernel|derivatives|quadrature|ensemble)\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GOE process fluctuation laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    auto* simulate = app.add_subcommand(
        "simulate", "sample paths, write eigenvalue/statistic CSVs");
    simulate->add_option("--config", config_path, "JSON config path")->required();
    simulate->add_option("--out", out_dir, "output directory");

    auto* experiment = app.add_subcommand(
        "experiment", "Monte Carlo fluctuation experiment with theory table");
    experiment->add_option("--config", config_path, "JSON config path")->required();
    experiment->add_option("--out", out_dir, "output directory");

    std::string f_text = "x", g_text = "x", model_text = "bm", route = "both";
    double s = 1.0, t = 1.0;
    int quad_m = 200;
    bool as_json = false;
    auto* covariance = app.add_subcommand(
        "covariance", "print limiting covariance (series and quadrature)");
    covariance->add_option("--f", f_text, "test function f (x, x^2, poly:..., sin)");
    covariance->add_option("--g", g_text, "test function g");
    covariance->add_option("--model", model_text, "bm | fbm:<H> | ou:<theta> | JSON");
    covariance->add_option("--s", s, "first time");
    covariance->add_option("--t", t, "second time");
    covariance->add_option("--route", route, "series | quadrature | both");
    covariance->add_option("--m", quad_m, "semicircle nodes for the quadrature route");
    covariance->add_flag("--json", as_json, "machine-readable output");

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a named invariant suite");
    verify->add_option("suite", suite, "kernel|derivatives|quadrature|ensemble")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
        if (experiment->parsed()) return cmd_experiment(config_path, out_dir);
        if (covariance->parsed()) {
            return cmd_covariance(f_text, g_text, model_text, s, t, route,
                                  quad_m, as_json);
        }
        if (verify->parsed()) return cmd_verify(suite);
    } catch (const degenerate_time_error& e) {
        std::cerr << "config error (degenerate time): " << e.what() << "\n";
        return 2;
    } catch (const off_grid_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

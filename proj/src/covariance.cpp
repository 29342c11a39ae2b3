#include "goefluct/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace goefluct {
namespace {

void require_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(what) +
                                    ": time must be finite and nonnegative");
    }
}

}  // namespace

CovarianceModel CovarianceModel::fractional_brownian(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::invalid_argument("fbm Hurst exponent must lie in (0,1)");
    }
    CovarianceModel m;
    m.kind_ = CovKind::FractionalBrownian;
    m.hurst_ = hurst;
    return m;
}

CovarianceModel CovarianceModel::brownian() {
    CovarianceModel m;
    m.kind_ = CovKind::Brownian;
    return m;
}

CovarianceModel CovarianceModel::ornstein_uhlenbeck(double theta) {
    if (!(theta > 0.0)) {
        throw std::invalid_argument("ou mean-reversion rate must be positive");
    }
    CovarianceModel m;
    m.kind_ = CovKind::OrnsteinUhlenbeck;
    m.theta_ = theta;
    return m;
}

CovarianceModel CovarianceModel::tabulated(
    std::vector<double> times, std::vector<std::vector<double>> matrix) {
    const std::size_t m = times.size();
    if (m == 0) throw std::invalid_argument("tabulated model: empty time list");
    for (std::size_t i = 0; i < m; ++i) {
        require_time(times[i], "tabulated model");
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw std::invalid_argument(
                "tabulated model: times must be strictly increasing");
        }
    }
    if (matrix.size() != m) {
        throw std::invalid_argument("tabulated model: matrix/time size mismatch");
    }
    CovarianceModel model;
    model.kind_ = CovKind::Tabulated;
    model.tab_times_ = std::move(times);
    model.tab_values_.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (matrix[i].size() != m) {
            throw std::invalid_argument("tabulated model: matrix not square");
        }
        for (std::size_t j = 0; j < m; ++j) {
            model.tab_values_[i * m + j] = matrix[i][j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (model.tab_values_[i * m + j] != model.tab_values_[j * m + i]) {
                throw std::invalid_argument("tabulated model: matrix not symmetric");
            }
        }
        if (model.tab_values_[i * m + i] < 0.0) {
            throw std::invalid_argument("tabulated model: negative diagonal");
        }
    }
    return model;
}

std::size_t CovarianceModel::tab_index(double t) const {
    for (std::size_t i = 0; i < tab_times_.size(); ++i) {
        if (tab_times_[i] == t) return i;
    }
    throw off_grid_error("tabulated covariance queried off its grid");
}

double CovarianceModel::evaluate(double s, double t) const {
    require_time(s, "evaluate");
    require_time(t, "evaluate");
    if (s > t) std::swap(s, t);  // exact symmetry in (s,t)
    switch (kind_) {
        case CovKind::FractionalBrownian: {
            const double h2 = 2.0 * hurst_;
            return 0.5 * (std::pow(s, h2) + std::pow(t, h2) -
                          std::pow(std::fabs(t - s), h2));
        }
        case CovKind::Brownian:
            return std::min(s, t);
        case CovKind::OrnsteinUhlenbeck:
            return std::exp(-theta_ * std::fabs(t - s));
        case CovKind::Tabulated:
            return tab_values_[tab_index(s) * tab_times_.size() + tab_index(t)];
    }
    return 0.0;
}

double CovarianceModel::sigma(double t) const {
    return std::sqrt(evaluate(t, t));
}

double CovarianceModel::rho(double s, double t) const {
    const double ss = sigma(s);
    const double st = sigma(t);
    if (!(ss > 0.0) || !(st > 0.0)) {
        throw degenerate_time_error("rho undefined at a time with sigma = 0");
    }
    const double raw = evaluate(s, t) / (ss * st);
    if (std::fabs(raw) <= 1.0) return raw;
    if (std::fabs(raw) <= 1.0 + 1e-12) return raw > 0.0 ? 1.0 : -1.0;
    throw std::invalid_argument("covariance model violates |rho| <= 1");
}

double CovarianceModel::partial_s(double s, double t) const {
    require_time(s, "partial_s");
    require_time(t, "partial_s");
    switch (kind_) {
        case CovKind::FractionalBrownian: {
            const double h2 = 2.0 * hurst_;
            const double sgn = s > t ? 1.0 : (s < t ? -1.0 : 0.0);
            return hurst_ * (std::pow(s, h2 - 1.0) -
                             sgn * std::pow(std::fabs(s - t), h2 - 1.0));
        }
        case CovKind::Brownian:
            return s < t ? 1.0 : 0.0;
        case CovKind::OrnsteinUhlenbeck: {
            const double sgn = t > s ? 1.0 : (t < s ? -1.0 : 0.0);
            return sgn * theta_ * std::exp(-theta_ * std::fabs(t - s));
        }
        case CovKind::Tabulated:
            throw std::logic_error("tabulated covariance has no analytic dR/ds");
    }
    return 0.0;
}

std::string CovarianceModel::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case CovKind::FractionalBrownian:
            os << "fbm(H=" << hurst_ << ")";
            break;
        case CovKind::Brownian:
            os << "bm";
            break;
        case CovKind::OrnsteinUhlenbeck:
            os << "ou(theta=" << theta_ << ")";
            break;
        case CovKind::Tabulated:
            os << "tabulated(" << tab_times_.size() << " times)";
            break;
    }
    return os.str();
}

TimeGrid::TimeGrid(std::vector<double> t) : times(std::move(t)) {
    if (times.empty()) throw std::invalid_argument("time grid is empty");
    for (std::size_t i = 0; i < times.size(); ++i) {
        require_time(times[i], "time grid");
        // Strictly increasing reals; adjacent values that collapse to the
        // same double are kept (their singular Gram goes down the jitter
        // path), only decreases are rejected.
        if (i > 0 && times[i] < times[i - 1]) {
            throw std::invalid_argument("time grid must be increasing");
        }
    }
}

void GramFactor::apply(const double* xi, double* out) const {
    const std::size_t m = size();
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += lower[i * m + k] * xi[k];
        out[i] = acc;
    }
}

namespace {

// Plain Cholesky; returns false on a nonpositive pivot.
bool try_cholesky(const std::vector<double>& gram, std::size_t m,
                  std::vector<double>& lower) {
    lower.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = gram[i * m + j];
            for (std::size_t k = 0; k < j; ++k) {
                sum -= lower[i * m + k] * lower[j * m + k];
            }
            if (i == j) {
                if (!(sum > 0.0)) return false;
                lower[i * m + i] = std::sqrt(sum);
            } else {
                lower[i * m + j] = sum / lower[j * m + j];
            }
        }
    }
    return true;
}

}  // namespace

GramFactor gram_factor(const CovarianceModel& model, const TimeGrid& grid,
                       const JitterPolicy& policy) {
    const std::size_t m = grid.size();
    std::vector<double> gram(m * m);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = model.evaluate(grid.times[i], grid.times[j]);
            gram[i * m + j] = v;
            gram[j * m + i] = v;
        }
        max_diag = std::max(max_diag, gram[i * m + i]);
    }

    GramFactor factor{grid, {}, 0.0};
    if (m == 1) {
        // sigma(t) may legitimately be 0 on a single-point grid.
        factor.lower = {std::sqrt(gram[0])};
        return factor;
    }
    if (try_cholesky(gram, m, factor.lower)) return factor;

    double jitter = policy.initial_scale * (max_diag > 0.0 ? max_diag : 1.0);
    for (int attempt = 0; attempt < policy.max_retries; ++attempt) {
        std::vector<double> bumped = gram;
        for (std::size_t i = 0; i < m; ++i) bumped[i * m + i] += jitter;
        if (try_cholesky(bumped, m, factor.lower)) {
            factor.jitter_applied = jitter;
            return factor;
        }
        jitter *= policy.growth;
    }
    throw not_positive_definite_error(
        "Gram matrix not positive semidefinite at the jitter cap (invalid "
        "covariance model?)");
}

}  // namespace goefluct

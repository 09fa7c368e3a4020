#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "seqaudit/core/numeric.hpp"

namespace seqaudit {

struct GpdFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generalized Pareto fit over an error sample. The location mu is pinned to
// the sample minimum, so (xi, sigma) describe the excesses above it.
struct GpdFit {
    double xi = 0.0;     // shape
    double sigma = 1.0;  // scale, > 0
    double mu = 0.0;     // location
    std::size_t n = 0;   // sample size used for the fit
};

namespace detail {

constexpr double kXiMin = -0.5;
constexpr double kXiMax = 1.0;

// Negative log-likelihood of the shifted sample for parameters (xi, sigma).
inline double gpd_nll(std::span<const double> x, double xi, double sigma) {
    const auto n = static_cast<double>(x.size());
    if (!(sigma > 0.0)) return std::numeric_limits<double>::infinity();
    if (std::abs(xi) < 1e-12) {
        double s = 0.0;
        for (double v : x) s += v;
        return n * std::log(sigma) + s / sigma;
    }
    double acc = 0.0;
    for (double v : x) {
        const double t = xi * v / sigma;
        if (t <= -1.0) return std::numeric_limits<double>::infinity();
        acc += std::log1p(t);
    }
    return n * std::log(sigma) + (1.0 + 1.0 / xi) * acc;
}

// Profile quantities under the reparameterization theta = xi / sigma:
// xi(theta) = mean(log1p(theta * x)), sigma(theta) = xi(theta) / theta.
// For each theta the likelihood is maximized in closed form, so the search
// over the shape is one-dimensional.
struct ProfilePoint {
    double theta, xi, sigma, nll;
};

inline ProfilePoint profile_at(std::span<const double> x, double theta) {
    const auto n = static_cast<double>(x.size());
    ProfilePoint p{theta, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    if (theta == 0.0) {
        double m = 0.0;
        for (double v : x) m += v;
        m /= n;
        p.xi = 0.0;
        p.sigma = m;
        p.nll = n * std::log(m) + n;
        return p;
    }
    double acc = 0.0;
    for (double v : x) {
        const double t = theta * v;
        if (t <= -1.0) return p;
        acc += std::log1p(t);
    }
    p.xi = acc / n;
    if (p.xi == 0.0) return p;
    p.sigma = p.xi / theta;
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) return p;
    p.nll = n * (std::log(p.sigma) + p.xi + 1.0);
    return p;
}

inline double golden_min_theta(std::span<const double> x, double lo, double hi) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = profile_at(x, c).nll;
    double fd = profile_at(x, d).nll;
    for (int it = 0; it < 120 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = profile_at(x, c).nll;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = profile_at(x, d).nll;
        }
    }
    return 0.5 * (a + b);
}

// Scale MLE for a fixed shape, by golden search over log(sigma).
inline double sigma_mle_fixed_xi(std::span<const double> x, double xi) {
    double xmax = 0.0, sum = 0.0;
    for (double v : x) {
        xmax = std::max(xmax, v);
        sum += v;
    }
    const double m = sum / static_cast<double>(x.size());
    double lo = std::log(std::max(1e-12, m * 1e-4));
    if (xi < 0.0) lo = std::max(lo, std::log(-xi * xmax * (1.0 + 1e-9)));
    double hi = std::log(std::max(m, xmax) * 1e4);
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = gpd_nll(x, xi, std::exp(c));
    double fd = gpd_nll(x, xi, std::exp(d));
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - (b - a) * inv_phi;
            fc = gpd_nll(x, xi, std::exp(c));
        } else {
            a = c; c = d; fc = fd;
            d = a + (b - a) * inv_phi;
            fd = gpd_nll(x, xi, std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

// Method-of-moments estimate (Hosking & Wallis), used when the likelihood
// search fails.
inline bool gpd_moments(std::span<const double> x, double& xi, double& sigma) {
    const double m = mean_of(x);
    const double v = population_variance(x);
    if (!(m > 0.0) || !(v > 0.0)) return false;
    const double r = m * m / v;
    xi = 0.5 * (1.0 - r);
    sigma = 0.5 * m * (r + 1.0);
    return std::isfinite(xi) && std::isfinite(sigma) && sigma > 0.0;
}

}  // namespace detail

// Maximum-likelihood GPD fit with mu = min(sample). The search runs over a
// Zhang-Stephens style grid in theta = xi/sigma followed by golden-section
// refinement; xi is clamped to [-0.5, 1.0] (with sigma re-estimated at the
// boundary) and a method-of-moments fallback covers failed searches.
inline GpdFit fit_gpd(std::span<const double> errors, std::size_t min_n = 30) {
    if (errors.size() < min_n)
        throw GpdFitError("gpd fit needs at least " + std::to_string(min_n) +
                          " samples, got " + std::to_string(errors.size()));
    if (!all_finite(errors)) throw GpdFitError("gpd fit input contains non-finite values");

    const double mu = *std::min_element(errors.begin(), errors.end());
    std::vector<double> x(errors.size());
    double xmax = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        x[i] = errors[i] - mu;
        xmax = std::max(xmax, x[i]);
    }
    if (!(xmax > 0.0)) throw GpdFitError("gpd fit input has zero spread");

    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = x.size();
    double xstar = sorted[static_cast<std::size_t>(std::floor(static_cast<double>(n) / 4.0 + 0.5))];
    if (!(xstar > 0.0)) xstar = mean_of(x);

    // Candidate grid in theta (positive thetas give heavy tails, negative a
    // finite endpoint). The domain is theta > -1/xmax.
    const double theta_floor = -1.0 / xmax;
    const int grid = 30 + static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    std::vector<double> cands;
    cands.reserve(static_cast<std::size_t>(grid) + 1);
    cands.push_back(0.0);
    for (int j = 1; j <= grid; ++j) {
        const double zs = 1.0 / xmax +
                          (1.0 - std::sqrt(static_cast<double>(grid) /
                                           (static_cast<double>(j) - 0.5))) /
                              (3.0 * xstar);
        const double theta = -zs;  // flip into the xi = +mean log1p(theta x) convention
        if (theta > theta_floor * (1.0 - 1e-12)) cands.push_back(theta);
    }

    detail::ProfilePoint best{0.0, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    std::size_t best_idx = 0;
    std::sort(cands.begin(), cands.end());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto p = detail::profile_at(x, cands[i]);
        if (p.nll < best.nll) {
            best = p;
            best_idx = i;
        }
    }

    double xi = 0.0, sigma = 0.0;
    bool ok = std::isfinite(best.nll);
    if (ok) {
        const double lo = best_idx > 0 ? cands[best_idx - 1] : best.theta - std::abs(best.theta) - 1e-3;
        const double hi = best_idx + 1 < cands.size() ? cands[best_idx + 1]
                                                      : best.theta + std::abs(best.theta) + 1e-3;
        const double theta = detail::golden_min_theta(x, std::max(lo, theta_floor * (1.0 - 1e-12)), hi);
        auto refined = detail::profile_at(x, theta);
        if (refined.nll > best.nll) refined = best;
        xi = refined.xi;
        sigma = refined.sigma;
        ok = std::isfinite(xi) && std::isfinite(sigma) && sigma > 0.0;
    }
    if (!ok && !detail::gpd_moments(x, xi, sigma))
        throw GpdFitError("gpd fit failed: likelihood search and moment fallback both degenerate");

    if (xi < detail::kXiMin || xi > detail::kXiMax) {
        xi = std::clamp(xi, detail::kXiMin, detail::kXiMax);
        sigma = detail::sigma_mle_fixed_xi(x, xi);
    }
    if (!(std::isfinite(sigma) && sigma > 0.0))
        throw GpdFitError("gpd fit failed: non-positive scale");

    return GpdFit{xi, sigma, mu, n};
}

// Closed-form GPD quantile. |xi| below 1e-9 uses the exponential limit.
inline double gpd_quantile(const GpdFit& fit, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gpd quantile needs p in (0,1)");
    if (std::abs(fit.xi) < 1e-9) return fit.mu - fit.sigma * std::log(1.0 - p);
    return fit.mu + fit.sigma / fit.xi * (std::pow(1.0 - p, -fit.xi) - 1.0);
}

inline double gpd_cdf(const GpdFit& fit, double v) {
    const double z = v - fit.mu;
    if (z <= 0.0) return 0.0;
    if (std::abs(fit.xi) < 1e-9) return 1.0 - std::exp(-z / fit.sigma);
    const double t = 1.0 + fit.xi * z / fit.sigma;
    if (t <= 0.0) return fit.xi < 0.0 ? 1.0 : 0.0;
    return 1.0 - std::pow(t, -1.0 / fit.xi);
}

// The sample element nearest the fitted p-quantile; ties resolve toward the
// smaller error so pruning stays conservative.
inline double select_threshold(std::span<const double> errors, const GpdFit& fit,
                               double p = 0.8) {
    if (errors.empty()) throw std::invalid_argument("select_threshold on empty sample");
    const double q = gpd_quantile(fit, p);
    double best = errors[0];
    double best_gap = std::abs(errors[0] - q);
    for (double e : errors) {
        const double gap = std::abs(e - q);
        if (gap < best_gap || (gap == best_gap && e < best)) {
            best = e;
            best_gap = gap;
        }
    }
    return best;
}

inline double select_threshold(std::span<const double> errors, double p = 0.8) {
    return select_threshold(errors, fit_gpd(errors), p);
}

}  // namespace seqaudit

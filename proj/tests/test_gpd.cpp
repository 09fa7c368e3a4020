#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "seqaudit/core/numeric.hpp"
#include "seqaudit/core/rng.hpp"
#include "seqaudit/extreme/gpd.hpp"

using namespace seqaudit;

namespace {

// Oracle sampler: draws from a known GPD through the closed-form inverse CDF,
// independent of the fitting code under test.
double gpd_inverse_cdf(double xi, double sigma, double mu, double u) {
    if (xi == 0.0) return mu - sigma * std::log(1.0 - u);
    return mu + sigma / xi * (std::pow(1.0 - u, -xi) - 1.0);
}

std::vector<double> sample_gpd(double xi, double sigma, double mu, std::size_t n,
                               std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = gpd_inverse_cdf(xi, sigma, mu, rng.uniform_open());
    return xs;
}

}  // namespace

TEST_CASE("gpd quantile closed forms", "[gpd]") {
    GpdFit exp_fit{0.0, 1.0, 0.0, 100};
    CHECK(gpd_quantile(exp_fit, 0.8) == Catch::Approx(-std::log(0.2)).epsilon(1e-12));
    CHECK(gpd_quantile(exp_fit, 0.8) == Catch::Approx(1.60944).margin(1e-5));

    GpdFit heavy{0.5, 1.0, 0.0, 100};
    CHECK(gpd_quantile(heavy, 0.8) ==
          Catch::Approx((std::pow(0.2, -0.5) - 1.0) / 0.5).epsilon(1e-12));
    CHECK(gpd_quantile(heavy, 0.8) == Catch::Approx(2.47214).margin(1e-5));

    CHECK_THROWS_AS(gpd_quantile(exp_fit, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gpd_quantile(exp_fit, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gpd_quantile(exp_fit, -0.2), std::invalid_argument);
}

TEST_CASE("gpd quantile is monotone in p", "[gpd]") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        GpdFit fit{rng.uniform(-0.4, 0.9), rng.uniform(0.1, 5.0), rng.uniform(-2.0, 2.0), 100};
        double prev = -1e300;
        for (double p : {0.05, 0.2, 0.5, 0.8, 0.95}) {
            const double q = gpd_quantile(fit, p);
            CHECK(q > prev);
            prev = q;
        }
    }
}

TEST_CASE("gpd fit recovers exponential parameters", "[gpd]") {
    // Exp(1) is GPD with xi = 0, sigma = 1, mu = 0.
    const auto xs = sample_gpd(0.0, 1.0, 0.0, 10000, 20240601);
    const auto fit = fit_gpd(xs);
    CHECK(fit.xi >= -0.1);
    CHECK(fit.xi <= 0.1);
    CHECK(fit.sigma >= 0.9);
    CHECK(fit.sigma <= 1.1);
    CHECK(fit.mu == Catch::Approx(*std::min_element(xs.begin(), xs.end())));
    CHECK(fit.n == xs.size());

    // Fitted CDF sanity at the empirical 80th percentile.
    const double q80 = empirical_quantile(xs, 0.8);
    const double c = gpd_cdf(fit, q80);
    CHECK(c >= 0.6);
    CHECK(c <= 0.95);
}

TEST_CASE("gpd fit recovers heavy-tail parameters", "[gpd]") {
    const auto xs = sample_gpd(0.5, 2.0, 0.0, 10000, 917);
    const auto fit = fit_gpd(xs);
    CHECK(fit.xi >= 0.4);
    CHECK(fit.xi <= 0.6);
    CHECK(fit.sigma >= 1.7);
    CHECK(fit.sigma <= 2.3);
}

TEST_CASE("gpd fit error shrinks with sample size", "[gpd]") {
    auto recovery_error = [](std::size_t n) {
        double acc = 0.0;
        for (std::uint64_t seed = 4242; seed < 4242 + 5; ++seed) {
            const auto xs = sample_gpd(0.3, 1.5, 0.0, n, seed);
            const auto fit = fit_gpd(xs);
            acc += std::abs(fit.xi - 0.3) + std::abs(fit.sigma - 1.5) / 1.5;
        }
        return acc / 5.0;
    };
    const double e3 = recovery_error(1000);
    const double e5 = recovery_error(100000);
    CHECK(e5 < e3);
    CHECK(e5 < 0.05);
}

TEST_CASE("gpd fit rejects degenerate input", "[gpd]") {
    std::vector<double> tiny(10, 1.0);
    CHECK_THROWS_AS(fit_gpd(tiny), GpdFitError);

    std::vector<double> flat(50, 3.25);
    CHECK_THROWS_AS(fit_gpd(flat), GpdFitError);

    std::vector<double> bad(50, 1.0);
    bad[7] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_gpd(bad), GpdFitError);
}

TEST_CASE("select_threshold picks the nearest sample element", "[gpd]") {
    // Forced fit (xi=0, sigma=1, mu=0): the 80% quantile is -ln(0.2).
    std::vector<double> errors{1.0, 1.60944, 3.0};
    GpdFit forced{0.0, 1.0, 0.0, 3};
    CHECK(select_threshold(errors, forced, 0.8) == Catch::Approx(1.60944));
}

TEST_CASE("select_threshold ties break toward the smaller error", "[gpd]") {
    // Quantile of the forced fit is exactly 2; both 1 and 3 are 1 away.
    std::vector<double> errors{3.0, 1.0};
    GpdFit forced{0.0, 1.0, 0.0, 2};
    forced.mu = 2.0 + std::log(0.2);  // shifts the 80% quantile to exactly 2
    const double q = gpd_quantile(forced, 0.8);
    REQUIRE(q == Catch::Approx(2.0).margin(1e-12));
    CHECK(select_threshold(errors, forced, 0.8) == 1.0);
}

TEST_CASE("select_threshold lands in the empirical 75-85 percentile band", "[gpd]") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const auto xs = sample_gpd(0.0, 1.0, 0.0, 2000, seed);
        const double tau = select_threshold(xs, 0.8);
        const double lo = empirical_quantile(xs, 0.75);
        const double hi = empirical_quantile(xs, 0.85);
        CHECK(tau >= lo);
        CHECK(tau <= hi);

        // Relative gap to the empirical 80th percentile stays small.
        const double q80 = empirical_quantile(xs, 0.8);
        CHECK(std::abs(tau - q80) / q80 <= 0.15);
    }
}

TEST_CASE("select_threshold output is always a sample member", "[gpd]") {
    Rng rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        const double xi = rng.uniform(-0.3, 0.7);
        const double sigma = rng.uniform(0.5, 3.0);
        const auto xs = sample_gpd(xi, sigma, rng.uniform(-1.0, 1.0), 200, 1000 + trial);
        const double tau = select_threshold(xs, 0.8);
        CHECK(std::find(xs.begin(), xs.end(), tau) != xs.end());
    }
}

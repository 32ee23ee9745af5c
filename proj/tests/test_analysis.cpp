#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavecast/analysis.hpp"
#include "wavecast/rng.hpp"

using namespace wavecast;
using analysis::elbow;
using analysis::fit_beta_curve;
using analysis::spearman;
using infometrics::NmiPoint;
using special::reg_inc_beta;

namespace {

// Logit-spaced rate grid in (lo, hi), the natural spacing for curves that
// live on a logit-scaled axis.
std::vector<double> logit_rates(std::size_t count, double lo, double hi) {
    const double a = std::log(lo / (1.0 - lo));
    const double b = std::log(hi / (1.0 - hi));
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) /
                                 static_cast<double>(count - 1);
        out[i] = 1.0 / (1.0 + std::exp(-t));
    }
    return out;
}

std::vector<NmiPoint> beta_samples(double alpha, double beta,
                                   const std::vector<double>& rates) {
    std::vector<NmiPoint> pts;
    pts.reserve(rates.size());
    for (double r : rates)
        pts.push_back({r, 1.0 - reg_inc_beta(r, alpha, beta)});
    return pts;
}

}  // namespace

TEST_CASE("exact curve samples give back the generating parameters", "[analysis]") {
    const auto pts = beta_samples(2.0, 5.0, logit_rates(20, 0.01, 0.99));
    const auto fit = fit_beta_curve(pts);
    REQUIRE(fit.converged);
    REQUIRE(fit.alpha == Catch::Approx(2.0).margin(1e-4));
    REQUIRE(fit.beta == Catch::Approx(5.0).margin(1e-4));
    REQUIRE(fit.sse < 1e-12);
}

TEST_CASE("the identity curve fits to unit parameters", "[analysis]") {
    std::vector<NmiPoint> pts;
    for (double r : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9})
        pts.push_back({r, 1.0 - r});
    const auto fit = fit_beta_curve(pts);
    REQUIRE(fit.converged);
    REQUIRE(fit.alpha == Catch::Approx(1.0).margin(1e-3));
    REQUIRE(fit.beta == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("noisy samples recover parameters within ten percent", "[analysis]") {
    const auto rates = logit_rates(30, 0.01, 0.99);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        std::vector<NmiPoint> pts;
        for (double r : rates) {
            const double clean = 1.0 - reg_inc_beta(r, 2.0, 5.0);
            pts.push_back({r, std::clamp(clean + 0.01 * rng.normal(), 0.0, 1.0)});
        }
        const auto fit = fit_beta_curve(pts);
        INFO("seed " << seed << " alpha " << fit.alpha << " beta " << fit.beta);
        REQUIRE(std::abs(fit.alpha - 2.0) / 2.0 < 0.10);
        REQUIRE(std::abs(fit.beta - 5.0) / 5.0 < 0.10);
    }
}

TEST_CASE("the fit never ends worse than its starting point", "[analysis]") {
    // A curve outside the fitted family, so the optimum is a genuine tradeoff.
    std::vector<NmiPoint> pts;
    for (double r : {0.05, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9})
        pts.push_back({r, std::exp(-5.0 * r)});
    double sse_at_start = 0.0;
    for (const auto& p : pts) {
        const double resid = p.nmi - (1.0 - reg_inc_beta(p.rate, 1.0, 1.0));
        sse_at_start += resid * resid;
    }
    const auto fit = fit_beta_curve(pts);
    REQUIRE(fit.sse <= sse_at_start);
}

TEST_CASE("endpoints do not count toward the minimum point requirement",
          "[analysis]") {
    REQUIRE_THROWS_AS(fit_beta_curve({{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}}),
                      usage_error);
    REQUIRE_THROWS_AS(fit_beta_curve({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}}),
                      usage_error);
    REQUIRE_NOTHROW(fit_beta_curve({{0.0, 1.0}, {0.3, 0.8}, {0.5, 0.5}, {0.7, 0.2}}));
    REQUIRE_THROWS_AS(fit_beta_curve({{0.2, 0.9}, {1.2, 0.5}, {0.8, 0.1}}),
                      usage_error);
    REQUIRE_THROWS_AS(fit_beta_curve({{0.2, 0.9}, {0.5, std::nan("")}, {0.8, 0.1}}),
                      usage_error);
}

TEST_CASE("a late jump puts the knee just before the jump", "[analysis]") {
    const auto res = elbow({0.4, 0.8, 0.9, 0.99, 0.999}, {1, 1, 1, 1, 10});
    REQUIRE_FALSE(res.flat);
    REQUIRE(res.recommended_rate == 0.99);
    REQUIRE(res.chord_distances.size() == 5);
    REQUIRE(res.chord_distances.front() == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(res.chord_distances.back() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("a straight line has no knee", "[analysis]") {
    std::vector<double> rates{0.4, 0.6, 0.8, 0.9, 0.95, 0.99, 0.999};
    std::vector<double> rmse;
    for (double r : rates) rmse.push_back(3.0 + 2.0 * r);
    const auto res = elbow(rates, rmse);
    REQUIRE(res.flat);
    REQUIRE(res.recommended_rate == 0.999);
}

TEST_CASE("a symmetric knee lands on the midpoint", "[analysis]") {
    const auto res = elbow({0.1, 0.3, 0.5, 0.7, 0.9}, {1.0, 1.0, 1.0, 5.5, 10.0});
    REQUIRE(res.recommended_rate == 0.5);
}

TEST_CASE("the recommendation ignores the scale of the error axis", "[analysis]") {
    const std::vector<double> rates{0.4, 0.6, 0.8, 0.9, 0.95, 0.99, 0.999};
    const std::vector<double> rmse{0.11, 0.112, 0.118, 0.13, 0.16, 0.35, 0.9};
    const auto base = elbow(rates, rmse);
    std::vector<double> scaled;
    for (double e : rmse) scaled.push_back(37.5 * e + 12.0);
    const auto res = elbow(rates, scaled);
    REQUIRE(res.recommended_rate == base.recommended_rate);
    for (std::size_t i = 0; i < rates.size(); ++i)
        REQUIRE(res.chord_distances[i] ==
                Catch::Approx(base.chord_distances[i]).margin(1e-12));
}

TEST_CASE("equidistant knees resolve to the lower rate", "[analysis]") {
    const auto res = elbow({0.0, 0.25, 0.75, 1.0}, {0.0, 0.5, 0.5, 1.0});
    REQUIRE(res.recommended_rate == 0.25);
}

TEST_CASE("malformed elbow inputs are rejected", "[analysis]") {
    REQUIRE_THROWS_AS(elbow({0.1, 0.5}, {1, 2}), usage_error);
    REQUIRE_THROWS_AS(elbow({0.1, 0.5, 0.3}, {1, 2, 3}), usage_error);
    REQUIRE_THROWS_AS(elbow({0.1, 0.5, 0.9}, {1, 2}), usage_error);
    REQUIRE_THROWS_AS(elbow({0.5, 0.5, 0.5}, {1, 2, 3}), usage_error);
    REQUIRE_THROWS_AS(elbow({0.1, 0.5, 0.9}, {1, std::nan(""), 3}), usage_error);
}

TEST_CASE("rank correlation matches reference values", "[analysis]") {
    // Oracle: reference statistical library, frozen.
    REQUIRE(spearman({3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0, 6.0},
                     {2.0, 1.0, 4.0, 3.0, 5.0, 8.0, 2.5, 7.0}) ==
            Catch::Approx(0.9047619047619048).margin(1e-12));
    REQUIRE(spearman({1, 2, 3, 4, 5, 6}, {6, 5, 4, 3, 2, 1}) ==
            Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(spearman({1.0, 2.0, 2.0, 2.0, 3.0, 4.0},
                     {10.0, 8.0, 9.0, 9.0, 4.0, 1.0}) ==
            Catch::Approx(-0.9548637106322311).margin(1e-12));
    REQUIRE(spearman({1, 2, 3, 4}, {1, 4, 2, 8}) ==
            Catch::Approx(0.8).margin(1e-12));
}

TEST_CASE("rank correlation sees only the ordering", "[analysis]") {
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8}, y;
    for (double v : x) y.push_back(std::exp(v));
    REQUIRE(spearman(x, y) == Catch::Approx(1.0).margin(1e-12));
    std::vector<double> x2(8, 3.0);
    REQUIRE(std::isnan(spearman(x2, y)));
    REQUIRE_THROWS_AS(spearman({1.0}, {2.0}), usage_error);
    REQUIRE_THROWS_AS(spearman({1, 2}, {1, 2, 3}), usage_error);
}

TEST_CASE("the beta CDF is monotone and obeys reflection", "[analysis]") {
    for (auto [a, b] : {std::pair{0.5, 0.5}, {2.0, 5.0}, {7.0, 1.3}}) {
        double prev = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = static_cast<double>(i) / 1000.0;
            const double v = reg_inc_beta(x, a, b);
            REQUIRE(v >= prev);
            prev = v;
        }
    }
    for (double x : {0.03, 0.2, 0.5, 0.77, 0.98})
        for (auto [a, b] : {std::pair{2.0, 5.0}, {0.7, 0.4}, {11.0, 3.0}})
            REQUIRE(reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) ==
                    Catch::Approx(1.0).margin(1e-12));
}

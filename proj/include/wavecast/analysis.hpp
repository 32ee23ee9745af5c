#pragma once

// Curve analysis over compression sweeps: parametric fits of fidelity-vs-rate
// curves through the regularized incomplete beta family, chord-distance elbow
// selection, and rank correlation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "wavecast/errors.hpp"
#include "wavecast/infometrics.hpp"
#include "wavecast/special.hpp"

namespace wavecast::analysis {

struct BetaFit {
    double alpha = 1.0;
    double beta = 1.0;
    double sse = 0.0;
    bool converged = false;
};

struct ElbowResult {
    double recommended_rate = 0.0;
    std::vector<double> chord_distances;
    bool flat = false;
};

namespace detail {

inline constexpr double kLogParamLo = -6.907755278982137;  // ln 1e-3
inline constexpr double kLogParamHi = 6.907755278982137;   // ln 1e3

inline double clamp_log_param(double p) {
    return std::clamp(p, kLogParamLo, kLogParamHi);
}

// Sum of squared residuals of 1 - I_r(a, b) against the observed curve.
// Parameters arrive in log space and are clamped to the optimizer box, so
// every point the simplex visits maps to a valid (a, b).
inline double beta_sse(const std::vector<infometrics::NmiPoint>& pts,
                       double log_a, double log_b) {
    const double a = std::exp(clamp_log_param(log_a));
    const double b = std::exp(clamp_log_param(log_b));
    double sse = 0.0;
    for (const auto& p : pts) {
        const double resid = p.nmi - (1.0 - special::reg_inc_beta(p.rate, a, b));
        sse += resid * resid;
    }
    return sse;
}

}  // namespace detail

// Least-squares fit of NMI(r) = 1 - I_r(alpha, beta) by Nelder-Mead descent
// on (log alpha, log beta), started at (1, 1). The returned objective never
// exceeds the objective at the start because the start is a simplex vertex
// and the best vertex only ever improves.
inline BetaFit fit_beta_curve(const std::vector<infometrics::NmiPoint>& points) {
    std::vector<double> interior;
    for (const auto& p : points) {
        if (!(p.rate >= 0.0 && p.rate <= 1.0) || !std::isfinite(p.nmi))
            throw usage_error("fit_beta_curve: points must have rate in [0,1] and finite nmi");
        if (p.rate > 0.0 && p.rate < 1.0) interior.push_back(p.rate);
    }
    std::sort(interior.begin(), interior.end());
    interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
    if (interior.size() < 3)
        throw usage_error("fit_beta_curve: need at least 3 distinct rates in (0,1)");

    using Vertex = std::array<double, 2>;
    auto f = [&](const Vertex& v) { return detail::beta_sse(points, v[0], v[1]); };

    std::array<Vertex, 3> x{Vertex{0.0, 0.0}, Vertex{1.0, 0.0}, Vertex{0.0, 1.0}};
    std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};

    const int max_iter = 2000;
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int i, int j) { return fx[i] < fx[j]; });
        const int lo = ord[0], mid = ord[1], hi = ord[2];

        double diam = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                diam = std::max(diam, std::hypot(x[i][0] - x[j][0], x[i][1] - x[j][1]));
        if (diam < 1e-8) {
            converged = true;
            break;
        }

        const Vertex c{(x[lo][0] + x[mid][0]) / 2.0, (x[lo][1] + x[mid][1]) / 2.0};
        const Vertex xr{c[0] + (c[0] - x[hi][0]), c[1] + (c[1] - x[hi][1])};
        const double fr = f(xr);

        if (fr < fx[lo]) {
            const Vertex xe{c[0] + 2.0 * (c[0] - x[hi][0]), c[1] + 2.0 * (c[1] - x[hi][1])};
            const double fe = f(xe);
            if (fe < fr) { x[hi] = xe; fx[hi] = fe; }
            else         { x[hi] = xr; fx[hi] = fr; }
        } else if (fr < fx[mid]) {
            x[hi] = xr;
            fx[hi] = fr;
        } else {
            const bool outside = fr < fx[hi];
            const Vertex& toward = outside ? xr : x[hi];
            const Vertex xc{c[0] + 0.5 * (toward[0] - c[0]), c[1] + 0.5 * (toward[1] - c[1])};
            const double fc = f(xc);
            if (fc < (outside ? fr : fx[hi])) {
                x[hi] = xc;
                fx[hi] = fc;
            } else {
                for (int i : {mid, hi}) {
                    x[i] = Vertex{x[lo][0] + 0.5 * (x[i][0] - x[lo][0]),
                                  x[lo][1] + 0.5 * (x[i][1] - x[lo][1])};
                    fx[i] = f(x[i]);
                }
            }
        }
    }

    const int best = static_cast<int>(
        std::min_element(fx.begin(), fx.end()) - fx.begin());
    BetaFit fit;
    fit.alpha = std::exp(detail::clamp_log_param(x[best][0]));
    fit.beta = std::exp(detail::clamp_log_param(x[best][1]));
    fit.sse = fx[best];
    fit.converged = converged;
    return fit;
}

// Knee selection: min-max normalize both axes, drop a chord from the first
// point to the last, and recommend the rate whose point sits farthest from
// that chord. A curve with no measurable bend recommends the highest rate
// and reports itself flat.
inline ElbowResult elbow(const std::vector<double>& rates,
                         const std::vector<double>& rmse) {
    if (rates.size() != rmse.size())
        throw usage_error("elbow: rates and rmse differ in length");
    if (rates.size() < 3)
        throw usage_error("elbow: need at least 3 points");
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!std::isfinite(rates[i]) || !std::isfinite(rmse[i]))
            throw usage_error("elbow: values must be finite");
        if (i > 0 && rates[i] < rates[i - 1])
            throw usage_error("elbow: rates must be sorted ascending");
    }
    const double r_span = rates.back() - rates.front();
    if (r_span <= 0.0)
        throw usage_error("elbow: rates must span a nonzero interval");
    const auto [e_min_it, e_max_it] = std::minmax_element(rmse.begin(), rmse.end());
    const double e_min = *e_min_it;
    const double e_span = *e_max_it - e_min;

    const std::size_t n = rates.size();
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = (rates[i] - rates.front()) / r_span;
        v[i] = e_span > 0.0 ? (rmse[i] - e_min) / e_span : 0.0;
    }

    const double du = u.back() - u.front();
    const double dv = v.back() - v.front();
    const double chord_len = std::hypot(du, dv);

    ElbowResult out;
    out.chord_distances.resize(n);
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cross = du * (v[i] - v.front()) - dv * (u[i] - u.front());
        out.chord_distances[i] = std::abs(cross) / chord_len;
        if (out.chord_distances[i] > best) {
            best = out.chord_distances[i];
            best_i = i;
        }
    }
    if (best < 1e-12) {
        out.flat = true;
        out.recommended_rate = rates.back();
    } else {
        out.recommended_rate = rates[best_i];
    }
    return out;
}

// Spearman rank correlation with average ranks on ties. Returns NaN when
// either input has zero rank variance, mirroring the usual convention.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw usage_error("spearman: inputs differ in length");
    if (x.size() < 2)
        throw usage_error("spearman: need at least 2 observations");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw usage_error("spearman: values must be finite");

    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
            i = j + 1;
        }
        return r;
    };

    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace wavecast::analysis

#pragma once

// Mutual information between two real sequences via the Kraskov-
// Stoegbauer-Grassberger estimator (variant 1), and the normalized mutual
// information curve of a signal against its own lossy reconstructions.
//
// Estimator: with Chebyshev distances in the joint space, d_i = distance to
// the k-th nearest neighbor of point i, and n_x(i), n_y(i) the counts
// strictly inside d_i along each marginal,
//   MI = psi(k) + psi(n) - mean_i[psi(n_x(i)+1) + psi(n_y(i)+1)]   (nats).
// Each variable is divided by its standard deviation before the search:
// Chebyshev balls are not shape-invariant under per-axis rescaling, and
// standardizing makes the estimate exactly independent of affine maps of
// either input (up to jitter). Duplicate coordinates (ubiquitous after heavy
// compression) would make neighbor ranks ill-defined, so a deterministic
// Gaussian jitter of scale 1e-10 x data range is added to each variable; the
// jitter stream is seeded from the variable's own content so the estimator
// is exactly symmetric in its arguments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "wavecast/compression.hpp"
#include "wavecast/errors.hpp"
#include "wavecast/rng.hpp"
#include "wavecast/special.hpp"

namespace wavecast::infometrics {

using special::digamma;

struct MIEstimate {
    double value = 0.0;  // clipped at 0 from below
    double raw = 0.0;    // the estimator can dip slightly negative
    int k = 0;
    std::size_t n = 0;
};

struct NmiPoint {
    double rate = 0.0;
    double nmi = 0.0;
};

namespace detail {

inline std::uint64_t content_hash(const std::vector<double>& v, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (double d : v) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof d);
        std::memcpy(&bits, &d, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

// Divide by the population standard deviation (distances ignore the mean, so
// no centering); then add content-seeded jitter so ksg_mi(x, y) and
// ksg_mi(y, x) perturb the identical point cloud and the estimate is exactly
// symmetric.
inline void standardize_and_jitter(std::vector<double>& v, std::uint64_t seed) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(v.size()));
    if (sd > 0.0)
        for (auto& x : v) x /= sd;
    Rng rng(content_hash(v, seed));
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double range = *hi - *lo;
    const double scale = 1e-10 * (range > 0.0 ? range : 1.0);
    for (auto& x : v) x += scale * rng.normal();
}

// Exact k-nearest-neighbor Chebyshev distances by scanning outward from each
// point in x-order: a candidate whose |dx| already exceeds the current k-th
// best distance cannot improve it, nor can anything farther in x.
inline std::vector<double> knn_chebyshev(const std::vector<double>& x,
                                         const std::vector<double>& y, int k) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

    std::vector<double> dist(n);
    std::vector<double> best;  // k smallest distances, ascending
    const auto uk = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < n; ++i) {
        best.clear();
        const std::size_t r = rank[i];
        std::size_t left = r, right = r + 1;
        while (true) {
            // Next candidate by |dx|.
            bool from_left;
            if (left > 0 && right < n)
                from_left = x[i] - x[order[left - 1]] <= x[order[right]] - x[i];
            else if (left > 0)
                from_left = true;
            else if (right < n)
                from_left = false;
            else
                break;
            const std::size_t j = from_left ? order[left - 1] : order[right];
            const double dx = std::abs(x[i] - x[j]);
            if (best.size() == uk && dx >= best.back()) break;
            if (from_left)
                --left;
            else
                ++right;
            const double d = std::max(dx, std::abs(y[i] - y[j]));
            if (best.size() < uk) {
                best.insert(std::upper_bound(best.begin(), best.end(), d), d);
            } else if (d < best.back()) {
                best.pop_back();
                best.insert(std::upper_bound(best.begin(), best.end(), d), d);
            }
        }
        dist[i] = best.back();
    }
    return dist;
}

// Count of values strictly inside (v - d, v + d), excluding the point itself.
inline std::size_t strict_count(const std::vector<double>& sorted, double v, double d) {
    const auto lo = std::upper_bound(sorted.begin(), sorted.end(), v - d);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), v + d);
    return static_cast<std::size_t>(hi - lo) - 1;
}

}  // namespace detail

inline MIEstimate ksg_mi(const std::vector<double>& x, const std::vector<double>& y,
                         int k = 10, std::uint64_t jitter_seed = 0) {
    const std::size_t n = x.size();
    if (y.size() != n) throw usage_error("ksg_mi: sequence lengths differ");
    if (k < 1) throw usage_error("ksg_mi: k must be >= 1");
    if (n <= static_cast<std::size_t>(k))
        throw data_error("ksg_mi: need more than k=" + std::to_string(k) +
                         " samples, got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (std::isnan(x[i]) || std::isnan(y[i]))
            throw data_error("ksg_mi: NaN at sample " + std::to_string(i));

    std::vector<double> xj = x, yj = y;
    detail::standardize_and_jitter(xj, jitter_seed);
    detail::standardize_and_jitter(yj, jitter_seed);

    const auto dist = detail::knn_chebyshev(xj, yj, k);

    std::vector<double> xs = xj, ys = yj;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto nx = detail::strict_count(xs, xj[i], dist[i]);
        const auto ny = detail::strict_count(ys, yj[i], dist[i]);
        acc += digamma(static_cast<double>(nx + 1)) +
               digamma(static_cast<double>(ny + 1));
    }
    MIEstimate est;
    est.k = k;
    est.n = n;
    est.raw = digamma(static_cast<double>(k)) + digamma(static_cast<double>(n)) -
              acc / static_cast<double>(n);
    est.value = std::max(0.0, est.raw);
    return est;
}

// NMI(r) = I(Y_r; Y) / I(Y_0; Y) where Y_r is the reconstruction after
// compressing at rate r. The normalizer uses the rate-0 reconstruction (not Y
// itself) so NMI(0) = 1 holds by construction; each rate's jitter stream is
// derived from (jitter_seed, rate) so points can be computed in any order.
inline std::vector<NmiPoint> nmi_curve(const std::vector<double>& original,
                                       const std::string& wavelet_name,
                                       const std::vector<double>& rates, int k = 10,
                                       std::uint64_t jitter_seed = 0) {
    if (!std::is_sorted(rates.begin(), rates.end()))
        throw usage_error("nmi_curve: rates must be sorted ascending");
    auto seed_for = [&](double rate) {
        return jitter_seed * 1000003ULL +
               static_cast<std::uint64_t>(std::llround(rate * 1e9));
    };
    const auto y0 = compression::decompress(
        compression::compress(original, wavelet_name, 0.0));
    const double denom = ksg_mi(y0, original, k, seed_for(0.0)).value;
    if (!(denom > 0.0))
        throw data_error("nmi_curve: baseline mutual information is zero");

    std::vector<NmiPoint> out;
    out.reserve(rates.size());
    for (double r : rates) {
        if (r == 0.0) {
            out.push_back({0.0, 1.0});
            continue;
        }
        const auto yr = compression::decompress(
            compression::compress(original, wavelet_name, r));
        const double num = ksg_mi(yr, original, k, seed_for(r)).value;
        out.push_back({r, std::clamp(num / denom, 0.0, 1.0)});
    }
    return out;
}

}  // namespace wavecast::infometrics

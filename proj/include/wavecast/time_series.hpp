#pragma once

// Multivariate minute-sampled time-series frames and the preparation pipeline:
// gap interpolation, equal-length segmentation, seeded train/validation/test
// splitting, unit-range normalization, and a deterministic synthetic generator
// used by the experiment harness and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wavecast/errors.hpp"
#include "wavecast/rng.hpp"

namespace wavecast::ts {

// One contiguous run of observations on a fixed minute grid. Covariates are
// split by availability at forecast time: past covariates are only observed
// up to the forecast origin, future covariates (control signals such as a
// pump schedule) are known ahead of time.
struct TimeSeriesFrame {
    std::string name;
    std::int64_t start_epoch_s = 0;
    std::int64_t step_seconds = 60;

    std::string target_name = "intake_level";
    std::vector<double> target;

    std::vector<std::string> past_names;  // e.g. sea_level, temperature
    std::vector<std::vector<double>> past;

    std::vector<std::string> future_names;  // e.g. pump_effect
    std::vector<std::vector<double>> future;

    std::size_t size() const { return target.size(); }
    std::int64_t timestamp(std::size_t i) const {
        return start_epoch_s + static_cast<std::int64_t>(i) * step_seconds;
    }
    double duration_days() const {
        return static_cast<double>(size()) * static_cast<double>(step_seconds) / 86400.0;
    }

    std::size_t variable_count() const { return 1 + past.size() + future.size(); }

    std::vector<std::string> variable_names() const {
        std::vector<std::string> out{target_name};
        out.insert(out.end(), past_names.begin(), past_names.end());
        out.insert(out.end(), future_names.begin(), future_names.end());
        return out;
    }

    // Variables in declaration order: target, past..., future...
    const std::vector<double>& variable(std::size_t v) const {
        if (v == 0) return target;
        v -= 1;
        if (v < past.size()) return past[v];
        return future.at(v - past.size());
    }
    std::vector<double>& variable(std::size_t v) {
        return const_cast<std::vector<double>&>(
            static_cast<const TimeSeriesFrame&>(*this).variable(v));
    }

    void check_shape() const {
        for (std::size_t v = 0; v < variable_count(); ++v)
            if (variable(v).size() != target.size())
                throw data_error("frame '" + name + "' has ragged variable lengths");
        if (past.size() != past_names.size() || future.size() != future_names.size())
            throw data_error("frame '" + name + "' has unnamed covariates");
    }

    TimeSeriesFrame slice(std::size_t begin, std::size_t end) const {
        TimeSeriesFrame out = *this;
        out.start_epoch_s = timestamp(begin);
        auto cut = [&](std::vector<double>& s) {
            s = std::vector<double>(s.begin() + static_cast<std::ptrdiff_t>(begin),
                                    s.begin() + static_cast<std::ptrdiff_t>(end));
        };
        cut(out.target);
        for (auto& s : out.past) cut(s);
        for (auto& s : out.future) cut(s);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Gap interpolation

namespace detail {

inline bool row_missing(const TimeSeriesFrame& f, std::size_t i) {
    for (std::size_t v = 0; v < f.variable_count(); ++v)
        if (std::isnan(f.variable(v)[i])) return true;
    return false;
}

inline void fill_linear(TimeSeriesFrame& f, std::size_t lo, std::size_t hi) {
    // Rows in (lo, hi) are missing; lo and hi are observed for every variable.
    const double span = static_cast<double>(hi - lo);
    for (std::size_t v = 0; v < f.variable_count(); ++v) {
        auto& s = f.variable(v);
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double t = static_cast<double>(i - lo) / span;
            s[i] = s[lo] + t * (s[hi] - s[lo]);
        }
    }
}

}  // namespace detail

// Fills missing runs strictly shorter than max_gap_minutes by per-variable
// linear interpolation; longer runs split the frame. A row with any missing
// variable counts as fully missing so sequences stay aligned. Missing runs
// touching a frame boundary have no bounding observation and are dropped with
// a warning.
inline std::vector<TimeSeriesFrame> interpolate_gaps(const TimeSeriesFrame& frame,
                                                     int max_gap_minutes = 60,
                                                     WarningLog* warnings = nullptr) {
    frame.check_shape();
    const std::size_t n = frame.size();
    const double step_min = static_cast<double>(frame.step_seconds) / 60.0;

    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [begin, end) observed
    std::vector<TimeSeriesFrame> out;
    std::size_t i = 0;
    while (i < n && detail::row_missing(frame, i)) ++i;
    if (i > 0)
        warn(warnings, "frame '" + frame.name + "': dropped " + std::to_string(i) +
                           " leading rows with no bounding observation");
    std::size_t run_begin = i;
    TimeSeriesFrame work = frame;
    while (i < n) {
        if (!detail::row_missing(work, i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && detail::row_missing(work, j)) ++j;
        const std::size_t gap_rows = j - i;
        const double gap_minutes = static_cast<double>(gap_rows) * step_min;
        if (j == n) {
            warn(warnings, "frame '" + frame.name + "': dropped " +
                               std::to_string(gap_rows) +
                               " trailing rows with no bounding observation");
            break;
        }
        if (gap_minutes < static_cast<double>(max_gap_minutes)) {
            detail::fill_linear(work, i - 1, j);
        } else {
            runs.emplace_back(run_begin, i);
            run_begin = j;
        }
        i = j;
    }
    runs.emplace_back(run_begin, std::min(i, n));

    int part = 0;
    for (auto [b, e] : runs) {
        if (e <= b) continue;
        TimeSeriesFrame piece = work.slice(b, e);
        if (runs.size() > 1) piece.name = frame.name + "/g" + std::to_string(part++);
        out.push_back(std::move(piece));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Segmentation

// Cuts frames longer than max_days into k = ceil(duration/max_days) pieces of
// equal length (within one row), which lands every piece in [min_days,
// max_days] whenever the input is at least min_days long. Shorter frames pass
// through unchanged.
inline std::vector<TimeSeriesFrame> segment(const TimeSeriesFrame& frame,
                                            double min_days = 5.0,
                                            double max_days = 10.0) {
    if (!(min_days < max_days)) throw usage_error("segment: min_days must be < max_days");
    const double duration = frame.duration_days();
    if (duration <= max_days) return {frame};
    const auto k = static_cast<std::size_t>(std::ceil(duration / max_days - 1e-12));
    const std::size_t n = frame.size();
    const std::size_t base = n / k, rem = n % k;
    std::vector<TimeSeriesFrame> out;
    std::size_t b = 0;
    for (std::size_t s = 0; s < k; ++s) {
        const std::size_t len = base + (s < rem ? 1 : 0);
        TimeSeriesFrame piece = frame.slice(b, b + len);
        piece.name = frame.name + "/s" + std::to_string(s);
        out.push_back(std::move(piece));
        b += len;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dataset splitting

struct DatasetSplit {
    std::vector<TimeSeriesFrame> train, validation, test;
    std::uint64_t seed = 0;
};

namespace detail {

// Largest-remainder apportionment of n items over the given fractions; every
// split with a positive fraction receives at least one item when n allows.
inline std::vector<std::size_t> apportion(std::size_t n, const std::vector<double>& fracs) {
    const double total = std::accumulate(fracs.begin(), fracs.end(), 0.0);
    std::vector<std::size_t> counts(fracs.size(), 0);
    std::vector<double> remainder(fracs.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fracs.size(); ++i) {
        const double quota = static_cast<double>(n) * fracs[i] / total;
        counts[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
        remainder[i] = quota - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    while (assigned < n) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < fracs.size(); ++i)
            if (remainder[i] > remainder[best] + 1e-15) best = i;
        ++counts[best];
        remainder[best] -= 1.0;
        ++assigned;
    }
    if (n >= fracs.size()) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            while (fracs[i] > 0.0 && counts[i] == 0) {
                auto largest = static_cast<std::size_t>(
                    std::max_element(counts.begin(), counts.end()) - counts.begin());
                --counts[largest];
                ++counts[i];
            }
        }
    }
    return counts;
}

}  // namespace detail

inline DatasetSplit split_datasets(const std::vector<TimeSeriesFrame>& frames,
                                   std::uint64_t seed,
                                   std::vector<double> fractions = {0.6, 0.2, 0.2}) {
    if (fractions.size() != 3) throw usage_error("split_datasets: need three fractions");
    if (frames.size() < 3)
        throw usage_error("split_datasets: need at least 3 segments, got " +
                          std::to_string(frames.size()));
    std::vector<std::size_t> order(frames.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    const auto counts = detail::apportion(frames.size(), fractions);
    DatasetSplit out;
    out.seed = seed;
    std::size_t pos = 0;
    auto take = [&](std::vector<TimeSeriesFrame>& dst, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) dst.push_back(frames[order[pos++]]);
    };
    take(out.train, counts[0]);
    take(out.validation, counts[1]);
    take(out.test, counts[2]);
    return out;
}

// ---------------------------------------------------------------------------
// Normalization

struct NormalizationParams {
    struct Range {
        double min = 0.0, max = 1.0;
    };
    std::map<std::string, Range> by_name;

    const Range& range(const std::string& name) const {
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw data_error("no normalization range fitted for variable '" + name + "'");
        return it->second;
    }
};

inline NormalizationParams fit_normalization(const std::vector<TimeSeriesFrame>& train) {
    if (train.empty()) throw usage_error("fit_normalization: empty training set");
    NormalizationParams p;
    for (const auto& f : train) {
        f.check_shape();
        const auto names = f.variable_names();
        for (std::size_t v = 0; v < names.size(); ++v) {
            auto& r = p.by_name
                          .try_emplace(names[v],
                                       NormalizationParams::Range{
                                           std::numeric_limits<double>::infinity(),
                                           -std::numeric_limits<double>::infinity()})
                          .first->second;
            for (double x : f.variable(v)) {
                if (std::isnan(x)) continue;
                r.min = std::min(r.min, x);
                r.max = std::max(r.max, x);
            }
        }
    }
    for (const auto& [name, r] : p.by_name)
        if (!(r.max > r.min))
            throw data_error("variable '" + name + "' has degenerate range [" +
                             std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
    return p;
}

// v' = (v - min) / (max - min), clamped to [0,1] so that test values outside
// the training range stay inside the unit cube; clamps are counted, not fatal.
inline TimeSeriesFrame apply_normalization(const TimeSeriesFrame& frame,
                                           const NormalizationParams& params,
                                           std::size_t* clamp_count = nullptr) {
    TimeSeriesFrame out = frame;
    const auto names = out.variable_names();
    for (std::size_t v = 0; v < names.size(); ++v) {
        const auto& r = params.range(names[v]);
        for (double& x : out.variable(v)) {
            x = (x - r.min) / (r.max - r.min);
            if (x < 0.0) {
                x = 0.0;
                if (clamp_count) ++*clamp_count;
            } else if (x > 1.0) {
                x = 1.0;
                if (clamp_count) ++*clamp_count;
            }
        }
    }
    return out;
}

inline TimeSeriesFrame invert_normalization(const TimeSeriesFrame& frame,
                                            const NormalizationParams& params) {
    TimeSeriesFrame out = frame;
    const auto names = out.variable_names();
    for (std::size_t v = 0; v < names.size(); ++v) {
        const auto& r = params.range(names[v]);
        for (double& x : out.variable(v)) x = r.min + x * (r.max - r.min);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic data

// Coastal pumping-station caricature: tides drive the sea level, a duty-cycled
// pump drains the intake basin, and the basin level relaxes toward a
// saturating equilibrium of the two. Exists to exercise the pipeline
// end-to-end with known dynamics, not to imitate any real site.
struct SyntheticConfig {
    double days = 30.0;
    int step_minutes = 1;

    // Sea level: two tidal constituents plus observation noise.
    double tide1_amp = 0.30, tide1_period_h = 12.42;
    double tide2_amp = 0.15, tide2_period_h = 12.00;
    double sea_noise = 0.01;

    // Temperature: slow seasonal drift plus a daily cycle; a mostly inert
    // covariate that forecasting models should learn to ignore.
    double temp_mean = 10.0, temp_seasonal_amp = 4.0, temp_daily_amp = 0.8;
    double temp_noise = 0.02;

    // Pump: square wave with randomized on/off durations around a duty cycle.
    double pump_duty = 0.45;
    double pump_cycle_minutes = 240.0;
    double pump_jitter = 0.25;  // fractional spread of each phase duration
    double pump_level = 1.0;

    // Target: first-order relaxation toward a saturating equilibrium.
    double tau_minutes = 90.0;
    double gain_sea = 0.9, gain_pump = -0.7;
    double base_level = 2.0;
    double saturation_span = 1.5;  // equilibrium offset saturates at +-span
    double shock_rate_per_day = 0.8;
    double shock_sigma = 0.35;
    double target_noise = 0.02;
};

inline std::vector<TimeSeriesFrame> generate_synthetic(const SyntheticConfig& cfg,
                                                       std::uint64_t seed) {
    if (!(cfg.days > 0.0) || cfg.step_minutes <= 0)
        throw usage_error("generate_synthetic: duration and step must be positive");
    const auto n = static_cast<std::size_t>(std::llround(cfg.days * 1440.0 /
                                                         cfg.step_minutes));
    if (n < 2) throw usage_error("generate_synthetic: configuration yields < 2 samples");
    const double dt_min = static_cast<double>(cfg.step_minutes);

    Rng root(seed);
    Rng rng_sea = root.fork(1), rng_temp = root.fork(2), rng_pump = root.fork(3),
        rng_shock = root.fork(4), rng_noise = root.fork(5);

    TimeSeriesFrame f;
    f.name = "synthetic";
    f.start_epoch_s = 1704067200;  // 2024-01-01T00:00:00Z
    f.step_seconds = static_cast<std::int64_t>(cfg.step_minutes) * 60;
    f.past_names = {"sea_level", "temperature"};
    f.future_names = {"pump_effect"};
    f.target.resize(n);
    f.past = {std::vector<double>(n), std::vector<double>(n)};
    f.future = {std::vector<double>(n)};

    auto& sea = f.past[0];
    auto& temp = f.past[1];
    auto& pump = f.future[0];

    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < n; ++i) {
        const double t_h = static_cast<double>(i) * dt_min / 60.0;
        sea[i] = cfg.tide1_amp * std::sin(two_pi * t_h / cfg.tide1_period_h) +
                 cfg.tide2_amp * std::sin(two_pi * t_h / cfg.tide2_period_h + 1.0) +
                 cfg.sea_noise * rng_sea.normal();
        const double t_d = t_h / 24.0;
        temp[i] = cfg.temp_mean + cfg.temp_seasonal_amp * std::sin(two_pi * t_d / 365.0) +
                  cfg.temp_daily_amp * std::sin(two_pi * t_d) +
                  cfg.temp_noise * rng_temp.normal();
    }

    // Pump schedule: alternate on/off phases whose durations jitter around the
    // duty split of the nominal cycle.
    {
        bool on = false;
        double boundary = 0.0;
        std::size_t i = 0;
        while (i < n) {
            const double nominal =
                cfg.pump_cycle_minutes * (on ? cfg.pump_duty : 1.0 - cfg.pump_duty);
            double dur = nominal;
            if (cfg.pump_jitter > 0.0)
                dur *= 1.0 + cfg.pump_jitter * rng_pump.uniform(-1.0, 1.0);
            boundary += std::max(dur, dt_min);
            while (i < n && static_cast<double>(i) * dt_min < boundary)
                pump[i++] = on ? cfg.pump_level : 0.0;
            on = !on;
        }
    }

    // Target: y' = (y_eq - y)/tau with a tanh-saturated equilibrium offset,
    // plus sparse step shocks and white observation noise.
    {
        const double p_shock =
            std::min(1.0, cfg.shock_rate_per_day * dt_min / 1440.0);
        double y = cfg.base_level;
        double shock_level = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double drive = cfg.gain_sea * sea[i] + cfg.gain_pump * pump[i];
            const double y_eq =
                cfg.base_level +
                (cfg.saturation_span > 0.0
                     ? cfg.saturation_span * std::tanh(drive / cfg.saturation_span)
                     : drive);
            if (cfg.shock_rate_per_day > 0.0 && rng_shock.uniform() < p_shock)
                shock_level += cfg.shock_sigma * rng_shock.normal();
            shock_level -= shock_level * dt_min / (4.0 * cfg.tau_minutes);
            y += (y_eq + shock_level - y) * dt_min / cfg.tau_minutes;
            f.target[i] = y + cfg.target_noise * rng_noise.normal();
        }
    }

    f.check_shape();
    return {f};
}

}  // namespace wavecast::ts

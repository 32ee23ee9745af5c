#pragma once

// Lossy compression of a signal by exact top-K selection over its wavelet
// coefficients. The zero budget is round(rate * N_Y) where N_Y is the sample
// count, so the achieved rate (zeroed / N_Y) tracks the request within one
// sample even when symmetric extension makes the coefficient vector longer
// than the signal. K is derived from that budget; ties in magnitude keep the
// lower flat index so results are independent of evaluation order, and kept
// sets nest as the rate drops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "wavecast/errors.hpp"
#include "wavecast/time_series.hpp"
#include "wavecast/wavelet.hpp"

namespace wavecast::compression {

using wavelet::Boundary;
using wavelet::FilterBank;
using wavelet::WaveletCoefficients;

struct CompressedSignal {
    std::string wavelet;
    Boundary boundary_mode = Boundary::symmetric;
    int levels = 0;
    std::uint64_t original_length = 0;
    double rate = 0.0;  // requested
    // (flat_index, value), flat index over [approx_L, detail_L, ..., detail_1],
    // strictly increasing.
    std::vector<std::pair<std::uint64_t, double>> kept;

    std::uint64_t total_coefficients() const {
        return total_from_shape();
    }
    double achieved_rate() const {
        const double zeroed =
            static_cast<double>(total_from_shape() - kept.size());
        return std::max(0.0, zeroed / static_cast<double>(original_length));
    }

    // `rate` is advisory metadata (the request that produced this object); it
    // is not part of the serialized form, so equality covers stored state only.
    bool operator==(const CompressedSignal& o) const {
        return wavelet == o.wavelet && boundary_mode == o.boundary_mode &&
               levels == o.levels && original_length == o.original_length &&
               kept == o.kept;
    }

   private:
    std::uint64_t total_from_shape() const;
};

// Per-level coefficient lengths in flat order [approx_L, detail_L, ..., detail_1].
inline std::vector<std::size_t> coefficient_shape(std::size_t n0, const FilterBank& bank,
                                                  int levels, Boundary mode) {
    std::vector<std::size_t> detail_len;  // index 0 = level 1 (finest)
    std::size_t n = n0;
    for (int l = 0; l < levels; ++l) {
        n = wavelet::detail::dec_length(n, bank.filter_length, mode);
        detail_len.push_back(n);
    }
    std::vector<std::size_t> shape{n};  // approx_L
    for (int l = levels - 1; l >= 0; --l) shape.push_back(detail_len[static_cast<std::size_t>(l)]);
    return shape;
}

inline std::vector<double> flatten(const WaveletCoefficients& c) {
    std::vector<double> flat(c.approx);
    for (std::size_t l = c.details.size(); l-- > 0;)
        flat.insert(flat.end(), c.details[l].begin(), c.details[l].end());
    return flat;
}

inline std::uint64_t CompressedSignal::total_from_shape() const {
    const auto& bank = wavelet::filter_bank(wavelet);
    const auto shape = coefficient_shape(static_cast<std::size_t>(original_length), bank,
                                         levels, boundary_mode);
    return std::accumulate(shape.begin(), shape.end(), std::uint64_t{0});
}

inline CompressedSignal compress(const std::vector<double>& signal,
                                 const std::string& wavelet_name, double rate,
                                 int levels = wavelet::kAutoLevels,
                                 Boundary mode = Boundary::symmetric,
                                 WarningLog* warnings = nullptr) {
    if (!(rate >= 0.0) || rate >= 1.0)
        throw usage_error("compression rate must lie in [0, 1), got " +
                          std::to_string(rate));
    const auto& bank = wavelet::filter_bank(wavelet_name);
    const auto coeffs = wavelet::wavedec(signal, bank, levels, mode);
    const auto flat = flatten(coeffs);
    const auto total = static_cast<std::uint64_t>(flat.size());

    const auto zero_budget =
        static_cast<std::uint64_t>(std::llround(rate * static_cast<double>(signal.size())));
    std::uint64_t keep = zero_budget >= total ? 0 : total - zero_budget;
    if (keep < 1) {
        keep = 1;
        warn(warnings, "rate " + std::to_string(rate) +
                           " exceeds the representable maximum for length " +
                           std::to_string(signal.size()) +
                           "; keeping one coefficient");
    }

    std::vector<std::uint64_t> idx(flat.size());
    std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    const auto larger = [&](std::uint64_t a, std::uint64_t b) {
        const double ma = std::abs(flat[a]), mb = std::abs(flat[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    };
    if (keep < total) {
        std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep - 1),
                         idx.end(), larger);
        idx.resize(keep);
    }
    std::sort(idx.begin(), idx.end());

    CompressedSignal cs;
    cs.wavelet = bank.name;
    cs.boundary_mode = mode;
    cs.levels = coeffs.levels;
    cs.original_length = signal.size();
    cs.rate = rate;
    cs.kept.reserve(idx.size());
    for (auto i : idx) cs.kept.emplace_back(i, flat[i]);
    return cs;
}

inline std::vector<double> decompress(const CompressedSignal& cs) {
    const auto& bank = wavelet::filter_bank(cs.wavelet);
    const auto n0 = static_cast<std::size_t>(cs.original_length);
    const auto shape = coefficient_shape(n0, bank, cs.levels, cs.boundary_mode);
    const auto total = std::accumulate(shape.begin(), shape.end(), std::size_t{0});

    std::vector<double> flat(total, 0.0);
    std::uint64_t prev = 0;
    bool first = true;
    for (const auto& [i, v] : cs.kept) {
        if (i >= total)
            throw format_error("kept index " + std::to_string(i) +
                                   " outside coefficient vector of " +
                                   std::to_string(total),
                               0);
        if (!first && i <= prev)
            throw format_error("kept indices not strictly increasing", 0);
        flat[i] = v;
        prev = i;
        first = false;
    }

    WaveletCoefficients c;
    c.levels = cs.levels;
    c.original_length = n0;
    c.wavelet = cs.wavelet;
    c.boundary_mode = cs.boundary_mode;
    auto it = flat.begin();
    c.approx.assign(it, it + static_cast<std::ptrdiff_t>(shape[0]));
    it += static_cast<std::ptrdiff_t>(shape[0]);
    c.details.resize(static_cast<std::size_t>(cs.levels));
    for (int l = cs.levels; l >= 1; --l) {
        const auto len = shape[static_cast<std::size_t>(cs.levels - l + 1)];
        c.details[static_cast<std::size_t>(l - 1)].assign(
            it, it + static_cast<std::ptrdiff_t>(len));
        it += static_cast<std::ptrdiff_t>(len);
    }
    return wavelet::waverec(c, bank);
}

// ---------------------------------------------------------------------------
// Frame bundles: every variable compressed independently at the same settings.

struct CompressedFrame {
    std::string name;
    std::int64_t start_epoch_s = 0;
    std::int64_t step_seconds = 60;
    std::string target_name;
    std::vector<std::string> past_names, future_names;
    std::vector<CompressedSignal> variables;  // target, past..., future...
};

inline CompressedFrame compress_frame(const ts::TimeSeriesFrame& frame,
                                      const std::string& wavelet_name, double rate,
                                      int levels = wavelet::kAutoLevels,
                                      Boundary mode = Boundary::symmetric,
                                      WarningLog* warnings = nullptr) {
    frame.check_shape();
    CompressedFrame out;
    out.name = frame.name;
    out.start_epoch_s = frame.start_epoch_s;
    out.step_seconds = frame.step_seconds;
    out.target_name = frame.target_name;
    out.past_names = frame.past_names;
    out.future_names = frame.future_names;
    for (std::size_t v = 0; v < frame.variable_count(); ++v)
        out.variables.push_back(
            compress(frame.variable(v), wavelet_name, rate, levels, mode, warnings));
    return out;
}

inline ts::TimeSeriesFrame decompress_frame(const CompressedFrame& cf) {
    ts::TimeSeriesFrame f;
    f.name = cf.name;
    f.start_epoch_s = cf.start_epoch_s;
    f.step_seconds = cf.step_seconds;
    f.target_name = cf.target_name;
    f.past_names = cf.past_names;
    f.future_names = cf.future_names;
    if (cf.variables.size() != 1 + cf.past_names.size() + cf.future_names.size())
        throw format_error("bundle variable count does not match its names", 0);
    f.target = decompress(cf.variables[0]);
    for (std::size_t p = 0; p < cf.past_names.size(); ++p)
        f.past.push_back(decompress(cf.variables[1 + p]));
    for (std::size_t q = 0; q < cf.future_names.size(); ++q)
        f.future.push_back(decompress(cf.variables[1 + cf.past_names.size() + q]));
    f.check_shape();
    return f;
}

}  // namespace wavecast::compression

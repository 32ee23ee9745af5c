#pragma once

// Versioned binary container for trained forecasters ("WFM1"):
//   magic "WFM1" | version u8 | model type u8 (0 linear, 1 boosted trees) |
//   lag spec (window u64 | chunk u64 | rollout u64 | 3 varint-counted varint
//   lists) | normalization entries (varint count; name u16-LE + bytes,
//   min f64, max f64) | payload.
// Linear payload: width u64 | horizon u64 | rank flag u8 | weights f64[w*h]
// row-major | intercept f64[h]. Tree payload: rounds u64 | depth u64 |
// rate f64 | min leaf u64 | width u64 | horizon u64 | base f64[h] | per
// horizon: varint tree count, per tree varint node count, nodes as
// (feature i64, threshold f64, left i64, right i64, value f64).
// Everything little-endian, matching the signal and bundle formats.

#include <cstring>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "wavecast/errors.hpp"
#include "wavecast/forecast.hpp"
#include "wavecast/serialize.hpp"
#include "wavecast/time_series.hpp"

namespace wavecast::model_io {

using compression::Bytes;
namespace enc = compression::detail;

inline constexpr std::uint8_t kModelVersion = 1;

struct ModelBundle {
    forecast::LagSpec spec;
    ts::NormalizationParams norm;
    std::variant<forecast::LinearModel, forecast::GbtModel> model;
};

namespace detail {

inline void put_string(Bytes& b, const std::string& s) {
    if (s.size() > 0xFFFF) throw usage_error("name too long to serialize");
    enc::put_u8(b, static_cast<std::uint8_t>(s.size() & 0xFF));
    enc::put_u8(b, static_cast<std::uint8_t>(s.size() >> 8));
    b.insert(b.end(), s.begin(), s.end());
}

inline std::string get_string(enc::Cursor& c, const char* what) {
    const std::size_t lo = c.u8(what);
    const std::size_t hi = c.u8(what);
    const std::size_t len = lo | (hi << 8);
    c.need(len, what);
    std::string s(reinterpret_cast<const char*>(c.p + c.off), len);
    c.off += len;
    return s;
}

inline void put_lag_list(Bytes& b, const std::vector<int>& v) {
    enc::put_varint(b, v.size());
    for (int l : v) enc::put_varint(b, static_cast<std::uint64_t>(l));
}

inline std::vector<int> get_lag_list(enc::Cursor& c, const char* what) {
    const std::uint64_t n = c.varint(what);
    if (n > 1u << 20) throw format_error(std::string("implausible list length in ") + what, c.off);
    std::vector<int> v(n);
    for (auto& l : v) l = static_cast<int>(c.varint(what));
    return v;
}

}  // namespace detail

inline Bytes serialize_model(const ModelBundle& bundle) {
    bundle.spec.validate();
    Bytes b;
    b.insert(b.end(), {'W', 'F', 'M', '1'});
    enc::put_u8(b, kModelVersion);
    enc::put_u8(b, bundle.model.index() == 0 ? 0 : 1);

    enc::put_u64(b, static_cast<std::uint64_t>(bundle.spec.input_window));
    enc::put_u64(b, static_cast<std::uint64_t>(bundle.spec.horizon_chunk));
    enc::put_u64(b, static_cast<std::uint64_t>(bundle.spec.rollout_horizon));
    detail::put_lag_list(b, bundle.spec.target_lags);
    detail::put_lag_list(b, bundle.spec.past_cov_lags);
    detail::put_lag_list(b, bundle.spec.future_cov_leads);

    enc::put_varint(b, bundle.norm.by_name.size());
    for (const auto& [name, range] : bundle.norm.by_name) {
        detail::put_string(b, name);
        enc::put_f64(b, range.min);
        enc::put_f64(b, range.max);
    }

    if (const auto* lin = std::get_if<forecast::LinearModel>(&bundle.model)) {
        enc::put_u64(b, lin->feature_width);
        enc::put_u64(b, lin->horizon);
        enc::put_u8(b, lin->rank_deficient ? 1 : 0);
        if (lin->weights.size() != lin->feature_width * lin->horizon ||
            lin->intercept.size() != lin->horizon)
            throw usage_error("linear model arrays disagree with its shape");
        for (double w : lin->weights) enc::put_f64(b, w);
        for (double c : lin->intercept) enc::put_f64(b, c);
    } else {
        const auto& gbt = std::get<forecast::GbtModel>(bundle.model);
        enc::put_u64(b, static_cast<std::uint64_t>(gbt.params.n_rounds));
        enc::put_u64(b, static_cast<std::uint64_t>(gbt.params.max_depth));
        enc::put_f64(b, gbt.params.learning_rate);
        enc::put_u64(b, static_cast<std::uint64_t>(gbt.params.min_samples_leaf));
        enc::put_u64(b, gbt.feature_width);
        enc::put_u64(b, gbt.horizon);
        if (gbt.base_score.size() != gbt.horizon || gbt.trees.size() != gbt.horizon)
            throw usage_error("tree model arrays disagree with its horizon");
        for (double s : gbt.base_score) enc::put_f64(b, s);
        for (const auto& ensemble : gbt.trees) {
            enc::put_varint(b, ensemble.size());
            for (const auto& tree : ensemble) {
                enc::put_varint(b, tree.nodes.size());
                for (const auto& nd : tree.nodes) {
                    enc::put_i64(b, nd.feature);
                    enc::put_f64(b, nd.threshold);
                    enc::put_i64(b, nd.left);
                    enc::put_i64(b, nd.right);
                    enc::put_f64(b, nd.value);
                }
            }
        }
    }
    return b;
}

inline ModelBundle deserialize_model(const Bytes& bytes) {
    enc::Cursor c{bytes.data(), bytes.size()};
    c.need(4, "magic");
    if (std::memcmp(c.p + c.off, "WFM1", 4) != 0)
        throw format_error("bad model magic", c.off);
    c.off += 4;
    const std::uint8_t version = c.u8("version");
    if (version != kModelVersion)
        throw format_error("unsupported model version " + std::to_string(version),
                           c.off - 1);
    const std::uint8_t type = c.u8("model type");
    if (type > 1) throw format_error("unknown model type", c.off - 1);

    ModelBundle bundle;
    bundle.spec.input_window = static_cast<int>(c.u64("input window"));
    bundle.spec.horizon_chunk = static_cast<int>(c.u64("horizon chunk"));
    bundle.spec.rollout_horizon = static_cast<int>(c.u64("rollout horizon"));
    bundle.spec.target_lags = detail::get_lag_list(c, "target lags");
    bundle.spec.past_cov_lags = detail::get_lag_list(c, "covariate lags");
    bundle.spec.future_cov_leads = detail::get_lag_list(c, "future leads");
    try {
        bundle.spec.validate();
    } catch (const usage_error& e) {
        throw format_error(std::string("stored lag spec invalid: ") + e.what(), c.off);
    }

    const std::uint64_t nnorm = c.varint("normalization count");
    for (std::uint64_t i = 0; i < nnorm; ++i) {
        const std::string name = detail::get_string(c, "normalization name");
        ts::NormalizationParams::Range r;
        r.min = c.f64("normalization min");
        r.max = c.f64("normalization max");
        bundle.norm.by_name[name] = r;
    }

    if (type == 0) {
        forecast::LinearModel lin;
        lin.feature_width = c.u64("feature width");
        lin.horizon = c.u64("horizon");
        lin.rank_deficient = c.u8("rank flag") != 0;
        if (lin.feature_width > (1u << 24) || lin.horizon > (1u << 16))
            throw format_error("implausible linear model shape", c.off);
        lin.weights.resize(lin.feature_width * lin.horizon);
        for (auto& w : lin.weights) w = c.f64("weight");
        lin.intercept.resize(lin.horizon);
        for (auto& b : lin.intercept) b = c.f64("intercept");
        bundle.model = std::move(lin);
    } else {
        forecast::GbtModel gbt;
        gbt.params.n_rounds = static_cast<int>(c.u64("rounds"));
        gbt.params.max_depth = static_cast<int>(c.u64("depth"));
        gbt.params.learning_rate = c.f64("learning rate");
        gbt.params.min_samples_leaf = static_cast<int>(c.u64("min leaf"));
        gbt.feature_width = c.u64("feature width");
        gbt.horizon = c.u64("horizon");
        if (gbt.feature_width > (1u << 24) || gbt.horizon > (1u << 16))
            throw format_error("implausible tree model shape", c.off);
        gbt.base_score.resize(gbt.horizon);
        for (auto& s : gbt.base_score) s = c.f64("base score");
        gbt.trees.resize(gbt.horizon);
        for (auto& ensemble : gbt.trees) {
            const std::uint64_t ntrees = c.varint("tree count");
            if (ntrees > 1u << 20) throw format_error("implausible tree count", c.off);
            ensemble.resize(ntrees);
            for (auto& tree : ensemble) {
                const std::uint64_t nnodes = c.varint("node count");
                if (nnodes == 0 || nnodes > 1u << 24)
                    throw format_error("implausible node count", c.off);
                tree.nodes.resize(nnodes);
                for (auto& nd : tree.nodes) {
                    nd.feature = static_cast<int>(c.i64("node feature"));
                    nd.threshold = c.f64("node threshold");
                    nd.left = static_cast<int>(c.i64("node left"));
                    nd.right = static_cast<int>(c.i64("node right"));
                    nd.value = c.f64("node value");
                    if (nd.feature >= static_cast<int>(gbt.feature_width))
                        throw format_error("node feature out of range", c.off);
                    if (nd.feature >= 0) {
                        const auto n = static_cast<int>(nnodes);
                        if (nd.left < 0 || nd.left >= n || nd.right < 0 || nd.right >= n)
                            throw format_error("node child out of range", c.off);
                    }
                }
            }
        }
        bundle.model = std::move(gbt);
    }
    if (c.off != bytes.size())
        throw format_error("trailing bytes after model payload", c.off);
    return bundle;
}

inline void save_model(const std::string& path, const ModelBundle& bundle) {
    const Bytes b = serialize_model(bundle);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(b.size()));
    if (!out) throw data_error("failed writing model to '" + path + "'");
}

inline ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open model file '" + path + "'");
    Bytes b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(b);
}

}  // namespace wavecast::model_io

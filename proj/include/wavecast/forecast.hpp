#pragma once

// Lagged-variable forecasters over TimeSeriesFrame data. Feature rows stack
// target lags, past-covariate lags, and future-known covariate leads; models
// predict a whole horizon chunk at once and extend it autoregressively.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wavecast/errors.hpp"
#include "wavecast/time_series.hpp"

namespace wavecast::forecast {

// Window geometry. input_window (P) bounds the lags, horizon_chunk (H) is
// the direct prediction width, rollout_horizon extends it autoregressively.
struct LagSpec {
    int input_window = 360;
    int horizon_chunk = 60;
    int rollout_horizon = 360;
    std::vector<int> target_lags;
    std::vector<int> past_cov_lags;
    std::vector<int> future_cov_leads;

    static LagSpec make(int P = 360, int H = 60, int R = 360) {
        LagSpec s;
        s.input_window = P;
        s.horizon_chunk = H;
        s.rollout_horizon = R;
        for (int l = 1; l <= P; ++l) s.target_lags.push_back(l);
        s.past_cov_lags = s.target_lags;
        for (int l = 0; l < H; ++l) s.future_cov_leads.push_back(l);
        s.validate();
        return s;
    }

    void validate() const {
        if (input_window < 1 || horizon_chunk < 1)
            throw usage_error("lag spec: window and chunk must be positive");
        if (rollout_horizon < horizon_chunk || rollout_horizon % horizon_chunk != 0)
            throw usage_error("lag spec: rollout horizon must be a positive multiple of the chunk");
        if (target_lags.empty())
            throw usage_error("lag spec: need at least one target lag");
        for (int l : target_lags)
            if (l < 1 || l > input_window)
                throw usage_error("lag spec: target lag outside [1, window]");
        for (int l : past_cov_lags)
            if (l < 1 || l > input_window)
                throw usage_error("lag spec: covariate lag outside [1, window]");
        for (int l : future_cov_leads)
            if (l < 0 || l >= horizon_chunk)
                throw usage_error("lag spec: future lead outside [0, chunk)");
    }

    std::size_t feature_width(std::size_t d_past, std::size_t d_future) const {
        return target_lags.size() + d_past * past_cov_lags.size() +
               d_future * future_cov_leads.size();
    }
};

// Flat row-major design matrix. row_origins holds the timestamp of the first
// predicted step of each row; every row is built from a single frame, so no
// features reach across segment boundaries.
struct DesignMatrix {
    std::size_t feature_width = 0;
    std::size_t horizon = 0;
    std::size_t d_past = 0;
    std::size_t d_future = 0;
    std::vector<double> features;
    std::vector<double> targets;
    std::vector<std::int64_t> row_origins;

    std::size_t rows() const { return row_origins.size(); }
};

namespace detail {

// Writes one feature row for forecast origin o (index of the first predicted
// sample). value_at lets the rollout substitute predictions and persistence
// fills; the design builder reads the frame directly.
template <typename TargetAt, typename PastAt>
void fill_features(const ts::TimeSeriesFrame& frame, const LagSpec& spec,
                   std::size_t o, TargetAt&& target_at, PastAt&& past_at,
                   double* out) {
    std::size_t w = 0;
    for (int l : spec.target_lags) out[w++] = target_at(o - static_cast<std::size_t>(l));
    for (std::size_t c = 0; c < frame.past.size(); ++c)
        for (int l : spec.past_cov_lags)
            out[w++] = past_at(c, o - static_cast<std::size_t>(l));
    for (std::size_t c = 0; c < frame.future.size(); ++c)
        for (int l : spec.future_cov_leads)
            out[w++] = frame.future[c][o + static_cast<std::size_t>(l)];
}

inline void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x))
            throw data_error(std::string("non-finite value in ") + what);
}

}  // namespace detail

// One row per forecast origin o (index of the first predicted sample), for
// o = P, P+stride, ... while o+H stays inside the frame. Frames too short
// for a single row are skipped with a warning.
inline DesignMatrix build_design(const std::vector<ts::TimeSeriesFrame>& frames,
                                 const LagSpec& spec, int stride = 1,
                                 WarningLog* warnings = nullptr) {
    spec.validate();
    if (stride < 1) throw usage_error("build_design: stride must be positive");
    if (frames.empty()) throw usage_error("build_design: no frames");

    DesignMatrix dm;
    dm.horizon = static_cast<std::size_t>(spec.horizon_chunk);
    dm.d_past = frames.front().past.size();
    dm.d_future = frames.front().future.size();
    dm.feature_width = spec.feature_width(dm.d_past, dm.d_future);

    const auto P = static_cast<std::size_t>(spec.input_window);
    const auto H = static_cast<std::size_t>(spec.horizon_chunk);
    for (const auto& frame : frames) {
        frame.check_shape();
        if (frame.past.size() != dm.d_past || frame.future.size() != dm.d_future)
            throw usage_error("build_design: frames disagree on covariate counts");
        if (frame.size() < P + H) {
            warn(warnings, "build_design: frame '" + frame.name + "' shorter than " +
                               std::to_string(P + H) + " samples, skipped");
            continue;
        }
        for (std::size_t o = P; o + H <= frame.size();
             o += static_cast<std::size_t>(stride)) {
            const std::size_t base = dm.features.size();
            dm.features.resize(base + dm.feature_width);
            detail::fill_features(
                frame, spec, o, [&](std::size_t i) { return frame.target[i]; },
                [&](std::size_t c, std::size_t i) { return frame.past[c][i]; },
                dm.features.data() + base);
            for (std::size_t h = 0; h < H; ++h)
                dm.targets.push_back(frame.target[o + h]);
            dm.row_origins.push_back(frame.timestamp(o));
        }
    }
    return dm;
}

// Multi-output linear model: column h of weights is the direct model for
// horizon step h.
struct LinearModel {
    std::size_t feature_width = 0;
    std::size_t horizon = 0;
    std::vector<double> weights;    // feature_width x horizon, row-major
    std::vector<double> intercept;  // horizon
    bool rank_deficient = false;
};

// Least squares via complete orthogonal decomposition: minimum-norm solution
// under rank deficiency. ridge > 0 augments the system with sqrt(ridge) rows
// on the weight block (the intercept stays unpenalized).
inline LinearModel fit_ols(const DesignMatrix& design, double ridge = 0.0,
                           WarningLog* warnings = nullptr) {
    if (design.rows() == 0) throw data_error("fit_ols: empty design matrix");
    if (!(ridge >= 0.0)) throw usage_error("fit_ols: ridge must be nonnegative");
    detail::check_finite(design.features, "design features");
    detail::check_finite(design.targets, "design targets");

    const auto n = static_cast<Eigen::Index>(design.rows());
    const auto w = static_cast<Eigen::Index>(design.feature_width);
    const auto h = static_cast<Eigen::Index>(design.horizon);

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> X(design.features.data(), n, w);
    Eigen::Map<const RowMajor> Y(design.targets.data(), n, h);

    const Eigen::Index extra = ridge > 0.0 ? w : 0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + extra, w + 1);
    A.topLeftCorner(n, w) = X;
    A.col(w).head(n).setOnes();
    if (extra > 0)
        A.block(n, 0, w, w) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(w, w);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + extra, h);
    B.topRows(n) = Y;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    const Eigen::MatrixXd sol = cod.solve(B);

    LinearModel model;
    model.feature_width = design.feature_width;
    model.horizon = design.horizon;
    model.weights.resize(design.feature_width * design.horizon);
    for (Eigen::Index i = 0; i < w; ++i)
        for (Eigen::Index j = 0; j < h; ++j)
            model.weights[static_cast<std::size_t>(i) * design.horizon +
                          static_cast<std::size_t>(j)] = sol(i, j);
    model.intercept.resize(design.horizon);
    for (Eigen::Index j = 0; j < h; ++j) model.intercept[static_cast<std::size_t>(j)] = sol(w, j);
    if (cod.rank() < w + 1) {
        model.rank_deficient = true;
        if (ridge == 0.0)
            warn(warnings, "fit_ols: design is rank deficient (rank " +
                               std::to_string(cod.rank()) + " of " +
                               std::to_string(w + 1) + "), minimum-norm solution");
    }
    return model;
}

// Regression tree stored as a flat node array; node 0 is the root. A node
// with feature < 0 is a leaf carrying the fitted value. Feature values
// strictly below the threshold go left.
struct GbtTree {
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes;

    double predict(const double* x) const {
        int i = 0;
        while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const Node& nd = nodes[static_cast<std::size_t>(i)];
            i = x[nd.feature] < nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(i)].value;
    }
};

struct GbtParams {
    int n_rounds = 200;
    int max_depth = 6;
    double learning_rate = 0.1;
    int min_samples_leaf = 5;
    // > 0 enables validation-based early stopping: a horizon column stops
    // boosting after this many rounds without a validation-loss improvement
    // and keeps its best prefix. Ignored when no validation set is supplied.
    int early_stop_patience = 0;
};

// Per-horizon-step boosted ensembles over shared features. A constant target
// column keeps an empty ensemble and predicts its base score.
struct GbtModel {
    GbtParams params;
    std::size_t feature_width = 0;
    std::size_t horizon = 0;
    std::vector<double> base_score;
    std::vector<std::vector<GbtTree>> trees;
};

namespace detail {

// Exact greedy level-wise tree construction on pre-sorted feature orders.
// Split gain is the sum-of-squares decomposition S_L^2/n_L + S_R^2/n_R -
// S^2/n; ties resolve to the first feature and lowest threshold because only
// strictly larger gains replace the incumbent.
class TreeBuilder {
  public:
    TreeBuilder(const DesignMatrix& design,
                const std::vector<std::vector<std::uint32_t>>& sorted, int max_depth,
                int min_leaf)
        : design_(design), sorted_(sorted), max_depth_(max_depth), min_leaf_(min_leaf),
          node_of_row_(design.rows()) {}

    GbtTree build(const std::vector<double>& resid) {
        struct NodeStat {
            std::int64_t n = 0;
            double sum = 0.0;
            double sum_sq = 0.0;
            int best_feature = -1;
            double best_threshold = 0.0;
            double best_gain = 0.0;
            bool open = false;
        };

        GbtTree tree;
        tree.nodes.push_back({});
        std::fill(node_of_row_.begin(), node_of_row_.end(), 0);

        std::vector<int> level{0};
        std::vector<NodeStat> stats(1);
        stats[0].n = static_cast<std::int64_t>(design_.rows());
        for (double r : resid) {
            stats[0].sum += r;
            stats[0].sum_sq += r * r;
        }
        stats[0].open = stats[0].n >= 2 * min_leaf_ &&
                        variance_mass(stats[0]) > kTinyMass * stats[0].sum_sq;

        for (int depth = 0; depth < max_depth_ && !level.empty(); ++depth) {
            scan_splits(level, stats, resid);

            std::vector<int> next_level;
            std::vector<NodeStat> next_stats;
            bool any_split = false;
            for (std::size_t s = 0; s < level.size(); ++s) {
                NodeStat& st = stats[s];
                const int id = level[s];
                if (!st.open || st.best_feature < 0) {
                    tree.nodes[static_cast<std::size_t>(id)].value =
                        st.sum / static_cast<double>(st.n);
                    local_id_[static_cast<std::size_t>(id)] = -1;
                    continue;
                }
                any_split = true;
                auto& nd = tree.nodes[static_cast<std::size_t>(id)];
                nd.feature = st.best_feature;
                nd.threshold = st.best_threshold;
                nd.left = static_cast<int>(tree.nodes.size());
                nd.right = nd.left + 1;
                tree.nodes.push_back({});
                tree.nodes.push_back({});
                local_id_[static_cast<std::size_t>(id)] =
                    static_cast<int>(next_level.size());
                next_level.push_back(nd.left);
                next_level.push_back(nd.right);
                next_stats.emplace_back();
                next_stats.emplace_back();
            }
            if (!any_split) break;

            // Reassign rows to children and accumulate child stats.
            for (std::size_t r = 0; r < node_of_row_.size(); ++r) {
                const int id = node_of_row_[r];
                const auto& nd = tree.nodes[static_cast<std::size_t>(id)];
                if (nd.feature < 0) continue;
                const double x = design_.features[r * design_.feature_width +
                                                  static_cast<std::size_t>(nd.feature)];
                const int child = x < nd.threshold ? nd.left : nd.right;
                node_of_row_[r] = child;
                const int li = local_id_[static_cast<std::size_t>(id)];
                NodeStat& cs = next_stats[static_cast<std::size_t>(
                    li + (child == nd.right ? 1 : 0))];
                cs.n += 1;
                cs.sum += resid[r];
                cs.sum_sq += resid[r] * resid[r];
            }
            for (auto& st : next_stats)
                st.open = st.n >= 2 * min_leaf_ &&
                          variance_mass(st) > kTinyMass * st.sum_sq;
            level = std::move(next_level);
            stats = std::move(next_stats);
        }

        // Whatever stayed unsplit at the depth limit becomes a leaf.
        for (std::size_t s = 0; s < level.size(); ++s) {
            auto& nd = tree.nodes[static_cast<std::size_t>(level[s])];
            if (nd.feature < 0)
                nd.value = stats[s].sum / static_cast<double>(stats[s].n);
        }
        return tree;
    }

    const std::vector<int>& node_of_row() const { return node_of_row_; }

  private:
    static constexpr double kTinyMass = 1e-12;

    struct ScanState {
        std::int64_t n_left = 0;
        double sum_left = 0.0;
        double prev_value = 0.0;
        bool has_prev = false;
    };

    static double variance_mass(const auto& st) {
        return st.sum_sq - st.sum * st.sum / static_cast<double>(st.n);
    }

    template <typename Stats>
    void scan_splits(const std::vector<int>& level, Stats& stats,
                     const std::vector<double>& resid) {
        if (static_cast<std::size_t>(local_id_.size()) <
            static_cast<std::size_t>(level.empty() ? 1 : level.back() + 1))
            local_id_.resize(static_cast<std::size_t>(level.back()) + 1, -1);
        for (std::size_t s = 0; s < level.size(); ++s)
            local_id_[static_cast<std::size_t>(level[s])] = static_cast<int>(s);

        std::vector<ScanState> scan(level.size());
        for (std::size_t f = 0; f < design_.feature_width; ++f) {
            std::fill(scan.begin(), scan.end(), ScanState{});
            for (std::uint32_t r : sorted_[f]) {
                const int id = node_of_row_[r];
                const int li = local_id_[static_cast<std::size_t>(id)];
                if (li < 0) continue;
                auto& st = stats[static_cast<std::size_t>(li)];
                if (!st.open) continue;
                auto& sc = scan[static_cast<std::size_t>(li)];
                const double x =
                    design_.features[static_cast<std::size_t>(r) * design_.feature_width + f];
                if (sc.has_prev && x > sc.prev_value && sc.n_left >= min_leaf_ &&
                    st.n - sc.n_left >= min_leaf_) {
                    const double mid = sc.prev_value + (x - sc.prev_value) / 2.0;
                    if (mid > sc.prev_value && mid < x) {
                        const double n_l = static_cast<double>(sc.n_left);
                        const double n_r = static_cast<double>(st.n - sc.n_left);
                        const double s_l = sc.sum_left;
                        const double s_r = st.sum - s_l;
                        const double gain = s_l * s_l / n_l + s_r * s_r / n_r -
                                            st.sum * st.sum / static_cast<double>(st.n);
                        if (gain > st.best_gain + kTinyMass &&
                            gain > kTinyMass * (1.0 + st.sum_sq)) {
                            st.best_gain = gain;
                            st.best_feature = static_cast<int>(f);
                            st.best_threshold = mid;
                        }
                    }
                }
                sc.n_left += 1;
                sc.sum_left += resid[r];
                sc.prev_value = x;
                sc.has_prev = true;
            }
        }
    }

    const DesignMatrix& design_;
    const std::vector<std::vector<std::uint32_t>>& sorted_;
    int max_depth_;
    int min_leaf_;
    std::vector<int> node_of_row_;
    std::vector<int> local_id_;
};

}  // namespace detail

// Boosted squared-loss trees, one ensemble per horizon step, exact greedy
// splits and no subsampling, so the fit is deterministic for fixed data.
inline GbtModel fit_gbt(const DesignMatrix& design, const GbtParams& params = {},
                        const DesignMatrix* validation = nullptr) {
    if (params.n_rounds < 0 || params.max_depth < 1 || params.min_samples_leaf < 1)
        throw usage_error("fit_gbt: invalid parameters");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
        throw usage_error("fit_gbt: learning rate must be in (0, 1]");
    if (design.rows() < 2 * static_cast<std::size_t>(params.min_samples_leaf))
        throw usage_error("fit_gbt: need at least 2*min_samples_leaf rows");
    detail::check_finite(design.features, "design features");
    detail::check_finite(design.targets, "design targets");
    const bool early_stop =
        validation != nullptr && params.early_stop_patience > 0 && validation->rows() > 0;
    if (early_stop && (validation->feature_width != design.feature_width ||
                       validation->horizon != design.horizon))
        throw usage_error("fit_gbt: validation set shape does not match the design");

    const std::size_t n = design.rows();
    std::vector<std::vector<std::uint32_t>> sorted(design.feature_width);
    for (std::size_t f = 0; f < design.feature_width; ++f) {
        auto& idx = sorted[f];
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), std::uint32_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
            return design.features[a * design.feature_width + f] <
                   design.features[b * design.feature_width + f];
        });
    }

    GbtModel model;
    model.params = params;
    model.feature_width = design.feature_width;
    model.horizon = design.horizon;
    model.base_score.resize(design.horizon);
    model.trees.resize(design.horizon);

    detail::TreeBuilder builder(design, sorted, params.max_depth,
                                params.min_samples_leaf);
    std::vector<double> resid(n);
    for (std::size_t h = 0; h < design.horizon; ++h) {
        double mn = design.targets[h], mx = design.targets[h], sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double y = design.targets[r * design.horizon + h];
            mn = std::min(mn, y);
            mx = std::max(mx, y);
            sum += y;
        }
        model.base_score[h] = sum / static_cast<double>(n);
        if (mx == mn) continue;  // constant column: base score only

        for (std::size_t r = 0; r < n; ++r)
            resid[r] = design.targets[r * design.horizon + h] - model.base_score[h];

        std::vector<double> val_pred;
        double best_val = std::numeric_limits<double>::infinity();
        int best_round = 0;
        if (early_stop)
            val_pred.assign(validation->rows(), model.base_score[h]);

        for (int round = 0; round < params.n_rounds; ++round) {
            GbtTree tree = builder.build(resid);
            for (std::size_t r = 0; r < n; ++r) {
                const double step =
                    params.learning_rate *
                    tree.nodes[static_cast<std::size_t>(builder.node_of_row()[r])].value;
                resid[r] -= step;
            }
            for (auto& nd : tree.nodes)
                if (nd.feature < 0) nd.value *= params.learning_rate;
            model.trees[h].push_back(std::move(tree));

            if (early_stop) {
                double sse = 0.0;
                for (std::size_t r = 0; r < val_pred.size(); ++r) {
                    val_pred[r] += model.trees[h].back().predict(
                        validation->features.data() + r * validation->feature_width);
                    const double d =
                        validation->targets[r * validation->horizon + h] - val_pred[r];
                    sse += d * d;
                }
                if (sse < best_val) {
                    best_val = sse;
                    best_round = round + 1;
                } else if (round + 1 - best_round >= params.early_stop_patience) {
                    break;
                }
            }
        }
        if (early_stop)
            model.trees[h].resize(static_cast<std::size_t>(best_round));
    }
    return model;
}

inline void predict_direct(const LinearModel& model, const double* features,
                           std::size_t width, double* out) {
    if (width != model.feature_width)
        throw usage_error("predict: feature width mismatch");
    for (std::size_t h = 0; h < model.horizon; ++h) out[h] = model.intercept[h];
    for (std::size_t f = 0; f < width; ++f) {
        const double x = features[f];
        const double* wrow = model.weights.data() + f * model.horizon;
        for (std::size_t h = 0; h < model.horizon; ++h) out[h] += x * wrow[h];
    }
}

inline void predict_direct(const GbtModel& model, const double* features,
                           std::size_t width, double* out) {
    if (width != model.feature_width)
        throw usage_error("predict: feature width mismatch");
    for (std::size_t h = 0; h < model.horizon; ++h) {
        double acc = model.base_score[h];
        for (const auto& tree : model.trees[h]) acc += tree.predict(features);
        out[h] = acc;
    }
}

template <typename Model>
std::vector<double> predict_direct(const Model& model,
                                   const std::vector<double>& features) {
    std::vector<double> out(model.horizon);
    predict_direct(model, features.data(), features.size(), out.data());
    return out;
}

// One evaluated forecast window. origin is the timestamp of the first
// predicted step.
struct ForecastWindow {
    std::int64_t origin = 0;
    std::vector<double> predictions;
    std::vector<double> actuals;
    double rmse = 0.0;
    double mae = 0.0;
};

namespace detail {

inline void score_window(ForecastWindow& w) {
    double se = 0.0, ae = 0.0;
    for (std::size_t i = 0; i < w.predictions.size(); ++i) {
        const double d = w.predictions[i] - w.actuals[i];
        se += d * d;
        ae += std::abs(d);
    }
    const auto n = static_cast<double>(w.predictions.size());
    w.rmse = std::sqrt(se / n);
    w.mae = ae / n;
}

template <typename Model>
ForecastWindow rollout_at(const Model& model, const ts::TimeSeriesFrame& frame,
                          std::size_t origin_index, const LagSpec& spec) {
    const auto P = static_cast<std::size_t>(spec.input_window);
    const auto H = static_cast<std::size_t>(spec.horizon_chunk);
    const auto R = static_cast<std::size_t>(spec.rollout_horizon);
    const std::size_t o = origin_index;
    if (o < P) throw data_error("rollout: fewer than window samples before origin");
    if (o + R > frame.size())
        throw data_error("rollout: frame does not cover the rollout horizon after origin");
    if (spec.feature_width(frame.past.size(), frame.future.size()) !=
        model.feature_width)
        throw usage_error("rollout: frame covariates do not match model feature width");

    ForecastWindow window;
    window.origin = frame.timestamp(o);
    window.predictions.reserve(R);
    std::vector<double> feats(model.feature_width);
    std::vector<double> chunk(H);
    for (std::size_t c = 0; c * H < R; ++c) {
        const std::size_t oc = o + c * H;
        // Lags past the origin come from prior predictions; past covariates
        // freeze at their last observed value (persistence fill).
        fill_features(
            frame, spec, oc,
            [&](std::size_t i) {
                return i < o ? frame.target[i] : window.predictions[i - o];
            },
            [&](std::size_t c2, std::size_t i) {
                return frame.past[c2][std::min(i, o - 1)];
            },
            feats.data());
        predict_direct(model, feats.data(), feats.size(), chunk.data());
        window.predictions.insert(window.predictions.end(), chunk.begin(), chunk.end());
    }
    window.actuals.assign(frame.target.begin() + static_cast<std::ptrdiff_t>(o),
                          frame.target.begin() + static_cast<std::ptrdiff_t>(o + R));
    score_window(window);
    return window;
}

}  // namespace detail

// Autoregressive rollout from a forecast origin given as a timestamp; the
// frame must hold the full input window before it and true future covariates
// across the whole rollout horizon.
template <typename Model>
ForecastWindow rollout(const Model& model, const ts::TimeSeriesFrame& frame,
                       std::int64_t origin_epoch_s, const LagSpec& spec) {
    spec.validate();
    const std::int64_t rel = origin_epoch_s - frame.start_epoch_s;
    if (rel < 0 || rel % frame.step_seconds != 0)
        throw usage_error("rollout: origin does not land on the frame grid");
    return detail::rollout_at(model, frame, static_cast<std::size_t>(rel / frame.step_seconds),
                              spec);
}

struct SegmentScore {
    std::string name;
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t window_count = 0;
};

// Full evaluation sweep. Per segment, residuals of all windows pool into one
// RMSE/MAE; the overall numbers average the per-segment scores so long and
// short segments weigh equally.
struct ForecastResult {
    std::vector<ForecastWindow> windows;
    std::vector<SegmentScore> segments;
    double rmse = 0.0;
    double mae = 0.0;
};

template <typename Model>
ForecastResult evaluate(const Model& model, const std::vector<ts::TimeSeriesFrame>& test,
                        const LagSpec& spec, int stride = 60,
                        WarningLog* warnings = nullptr) {
    spec.validate();
    if (stride < 1) throw usage_error("evaluate: stride must be positive");
    const auto P = static_cast<std::size_t>(spec.input_window);
    const auto R = static_cast<std::size_t>(spec.rollout_horizon);

    ForecastResult result;
    for (const auto& frame : test) {
        if (frame.size() < P + R) {
            warn(warnings, "evaluate: frame '" + frame.name + "' too short for a window, skipped");
            continue;
        }
        SegmentScore seg;
        seg.name = frame.name;
        double se = 0.0, ae = 0.0;
        std::size_t count = 0;
        for (std::size_t o = P; o + R <= frame.size(); o += static_cast<std::size_t>(stride)) {
            ForecastWindow w = detail::rollout_at(model, frame, o, spec);
            for (std::size_t i = 0; i < w.predictions.size(); ++i) {
                const double d = w.predictions[i] - w.actuals[i];
                se += d * d;
                ae += std::abs(d);
            }
            count += w.predictions.size();
            seg.window_count += 1;
            result.windows.push_back(std::move(w));
        }
        seg.rmse = std::sqrt(se / static_cast<double>(count));
        seg.mae = ae / static_cast<double>(count);
        result.segments.push_back(std::move(seg));
    }
    if (result.windows.empty())
        throw data_error("evaluate: no frame admits a single evaluation window");
    for (const auto& seg : result.segments) {
        result.rmse += seg.rmse;
        result.mae += seg.mae;
    }
    result.rmse /= static_cast<double>(result.segments.size());
    result.mae /= static_cast<double>(result.segments.size());
    return result;
}

}  // namespace wavecast::forecast

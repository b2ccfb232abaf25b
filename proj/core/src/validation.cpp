#include "tsplab/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "tsplab/stats.hpp"
#include "tsplab/tree.hpp"

namespace tsplab {

namespace {

std::vector<int> shuffled_indices(int n, RngStream& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

/// Deals shuffled rows into k folds. Classification rows are dealt class by
/// class with a running counter, which stratifies large classes and still
/// leaves no fold empty when k <= rows.
std::vector<std::vector<int>> make_folds(const Dataset& data, int k, RngStream& rng) {
    const int n = data.rows();
    const std::vector<int> order = shuffled_indices(n, rng);
    std::vector<std::vector<int>> folds(k);
    if (data.target_kind == TargetKind::classification) {
        int counter = 0;
        for (int c = 0; c < static_cast<int>(data.class_names.size()); ++c)
            for (int i : order)
                if (static_cast<int>(data.y[i]) == c) folds[counter++ % k].push_back(i);
    } else {
        for (int i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
    }
    return folds;
}

std::vector<int> rows_outside_fold(const std::vector<std::vector<int>>& folds, int f) {
    std::vector<int> rows;
    for (int g = 0; g < static_cast<int>(folds.size()); ++g)
        if (g != f) rows.insert(rows.end(), folds[g].begin(), folds[g].end());
    std::sort(rows.begin(), rows.end());
    return rows;
}

double holdout_rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(pred.size()));
}

} // namespace

CvResult cross_validate(const Dataset& data, const FoldEvaluator& learner, int k, RngStream& rng) {
    if (k < 2) throw std::invalid_argument("cross_validate: k must be >= 2");
    if (k > data.rows())
        throw std::invalid_argument("cross_validate: k exceeds the " +
                                    std::to_string(data.rows()) + " rows");
    const std::vector<std::vector<int>> folds = make_folds(data, k, rng);
    CvResult result;
    result.fold_metrics.reserve(k);
    for (int f = 0; f < k; ++f) {
        std::vector<int> test_rows = folds[f];
        std::sort(test_rows.begin(), test_rows.end());
        const Dataset train = subset_rows(data, rows_outside_fold(folds, f));
        const Dataset test = subset_rows(data, test_rows);
        result.fold_metrics.push_back(learner(train, test));
    }
    result.mean_metric = mean(result.fold_metrics);
    return result;
}

FoldEvaluator tree_accuracy(int max_depth, int min_leaf) {
    return [max_depth, min_leaf](const Dataset& train, const Dataset& test) {
        const DecisionTree tree = fit_tree(train, max_depth, min_leaf);
        int correct = 0;
        for (int i = 0; i < test.rows(); ++i)
            if (predict_tree(tree, test.x[i]) == static_cast<int>(test.y[i])) ++correct;
        return static_cast<double>(correct) / static_cast<double>(test.rows());
    };
}

FoldEvaluator mars_rmse(int max_terms, int max_degree) {
    return [max_terms, max_degree](const Dataset& train, const Dataset& test) {
        const MarsModel model = fit_mars(train, max_terms, max_degree);
        std::vector<double> pred(test.rows());
        for (int i = 0; i < test.rows(); ++i) pred[i] = predict_mars(model, test.x[i]);
        return holdout_rmse(pred, test.y);
    };
}

FoldEvaluator mean_predictor_rmse() {
    return [](const Dataset& train, const Dataset& test) {
        const double mu = mean(train.y);
        std::vector<double> pred(test.rows(), mu);
        return holdout_rmse(pred, test.y);
    };
}

SelectionTrace forward_feature_selection(const Dataset& data, const FsConfig& cfg,
                                         RngStream& rng) {
    if (data.target_kind != TargetKind::regression)
        throw std::invalid_argument("forward_feature_selection: dataset target is not numeric");
    if (data.rows() < 15)
        throw std::invalid_argument("forward_feature_selection: needs at least 15 rows, got " +
                                    std::to_string(data.rows()));
    if (cfg.outer_k < 2 || cfg.outer_k > data.rows())
        throw std::invalid_argument("forward_feature_selection: outer_k out of range");
    if (cfg.max_features < 0)
        throw std::invalid_argument("forward_feature_selection: max_features must be >= 0");

    RngStream fold_rng = rng.child(0);
    const std::vector<std::vector<int>> folds = make_folds(data, cfg.outer_k, fold_rng);

    SelectionTrace trace;
    std::vector<std::vector<double>> step_rmse_by_fold;

    for (int f = 0; f < cfg.outer_k; ++f) {
        std::vector<int> test_rows = folds[f];
        std::sort(test_rows.begin(), test_rows.end());
        const Dataset outer_train = subset_rows(data, rows_outside_fold(folds, f));
        const Dataset outer_test = subset_rows(data, test_rows);

        RngStream split_rng = rng.child(1, static_cast<std::uint64_t>(f));
        const int n_tr = outer_train.rows();
        const std::vector<int> order = shuffled_indices(n_tr, split_rng);
        int cut = (2 * n_tr) / 3;
        cut = std::clamp(cut, 1, n_tr - 1);
        std::vector<int> fit_rows(order.begin(), order.begin() + cut);
        std::vector<int> val_rows(order.begin() + cut, order.end());
        std::sort(fit_rows.begin(), fit_rows.end());
        std::sort(val_rows.begin(), val_rows.end());
        const Dataset inner_fit = subset_rows(outer_train, fit_rows);
        const Dataset inner_val = subset_rows(outer_train, val_rows);
        if (inner_fit.rows() < 10)
            throw std::invalid_argument(
                "forward_feature_selection: outer fold leaves fewer than 10 rows for the "
                "inner holdout fit");

        const double baseline = mean_predictor_rmse()(inner_fit, inner_val);
        std::vector<double> step_rmse{baseline};
        std::vector<std::string> selected;
        double current = baseline;

        while (static_cast<int>(selected.size()) < cfg.max_features &&
               static_cast<int>(selected.size()) < data.cols()) {
            int best_col = -1;
            double best_rmse = std::numeric_limits<double>::infinity();
            for (int c = 0; c < data.cols(); ++c) {
                if (std::find(selected.begin(), selected.end(), data.columns[c]) !=
                    selected.end())
                    continue;
                std::vector<std::string> columns = selected;
                columns.push_back(data.columns[c]);
                const Dataset fit_sel = select_columns(inner_fit, columns);
                const Dataset val_sel = select_columns(inner_val, columns);
                const double rmse = mars_rmse(cfg.mars_max_terms)(fit_sel, val_sel);
                if (rmse < best_rmse) {
                    best_rmse = rmse;
                    best_col = c;
                }
            }
            if (best_col < 0 || current - best_rmse < cfg.threshold) break;
            selected.push_back(data.columns[best_col]);
            current = best_rmse;
            step_rmse.push_back(best_rmse);
        }

        double fold_outer;
        if (selected.empty()) {
            fold_outer = mean_predictor_rmse()(outer_train, outer_test);
        } else {
            fold_outer = mars_rmse(cfg.mars_max_terms)(select_columns(outer_train, selected),
                                                       select_columns(outer_test, selected));
        }
        trace.fold_selections.push_back(std::move(selected));
        trace.outer_fold_rmse.push_back(fold_outer);
        step_rmse_by_fold.push_back(std::move(step_rmse));
    }

    // Aggregate per-step inner RMSE across folds; folds that stopped early
    // carry their last value forward, so the mean stays non-increasing.
    std::size_t max_steps = 0;
    for (const auto& s : step_rmse_by_fold) max_steps = std::max(max_steps, s.size());
    for (std::size_t s = 0; s < max_steps; ++s) {
        double sum = 0.0;
        for (const auto& fold_steps : step_rmse_by_fold)
            sum += fold_steps[std::min(s, fold_steps.size() - 1)];
        SelectionStep step;
        step.inner_rmse = sum / static_cast<double>(step_rmse_by_fold.size());
        if (s >= 1) {
            std::map<std::string, int> votes;
            for (const auto& sel : trace.fold_selections)
                if (sel.size() >= s) votes[sel[s - 1]] += 1;
            int best = 0;
            for (const auto& [name, count] : votes)
                if (count > best) {
                    best = count;
                    step.feature = name;
                }
        }
        trace.steps.push_back(std::move(step));
    }

    std::map<std::string, std::pair<int, double>> placement; // count, summed step index
    for (const auto& sel : trace.fold_selections)
        for (std::size_t pos = 0; pos < sel.size(); ++pos) {
            auto& entry = placement[sel[pos]];
            entry.first += 1;
            entry.second += static_cast<double>(pos);
        }
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [name, entry] : placement)
        if (entry.first * 2 >= cfg.outer_k)
            ranked.emplace_back(entry.second / entry.first, name);
    std::sort(ranked.begin(), ranked.end());
    for (auto& [pos, name] : ranked) trace.final_features.push_back(std::move(name));

    trace.outer_rmse = mean(trace.outer_fold_rmse);
    return trace;
}

nlohmann::json to_json(const SelectionTrace& trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (const SelectionStep& s : trace.steps)
        steps.push_back({{"feature", s.feature}, {"inner_rmse", s.inner_rmse}});
    return nlohmann::json{{"steps", std::move(steps)},
                          {"fold_selections", trace.fold_selections},
                          {"final_features", trace.final_features},
                          {"outer_fold_rmse", trace.outer_fold_rmse},
                          {"outer_rmse", trace.outer_rmse}};
}

std::vector<PdpPoint> weighted_partial_dependence(const MarsModel& model, const Dataset& data,
                                                  const std::string& feature,
                                                  const std::vector<double>& grid) {
    if (grid.empty())
        throw std::invalid_argument("weighted_partial_dependence: empty grid");
    if (data.rows() < 1)
        throw std::invalid_argument("weighted_partial_dependence: empty dataset");

    const auto fit = std::find(data.columns.begin(), data.columns.end(), feature);
    if (fit == data.columns.end())
        throw std::invalid_argument("weighted_partial_dependence: feature '" + feature +
                                    "' not in data");
    const int fcol = static_cast<int>(fit - data.columns.begin());

    std::vector<int> col_map(model.columns.size());
    int override_col = -1;
    for (std::size_t j = 0; j < model.columns.size(); ++j) {
        const auto it = std::find(data.columns.begin(), data.columns.end(), model.columns[j]);
        if (it == data.columns.end())
            throw std::invalid_argument("weighted_partial_dependence: data lacks model feature '" +
                                        model.columns[j] + "'");
        col_map[j] = static_cast<int>(it - data.columns.begin());
        if (model.columns[j] == feature) override_col = static_cast<int>(j);
    }

    const int n = data.rows();
    std::vector<double> fvals(n);
    for (int i = 0; i < n; ++i) fvals[i] = data.x[i][fcol];
    double alpha = sample_sd(fvals) / 4.0;
    // The weights share alpha as a common factor, so it cancels in the
    // average; dropping to 1 keeps the curve defined when the feature has no
    // spread.
    if (alpha == 0.0) alpha = 1.0;

    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    std::vector<PdpPoint> curve;
    curve.reserve(grid.size());
    std::vector<double> input(model.columns.size());
    for (double xs : grid) {
        double wsum = 0.0;
        double msum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = fvals[i] - xs;
            const double w = alpha * inv_sqrt_2pi * std::exp(-0.5 * t * t);
            for (std::size_t j = 0; j < input.size(); ++j) input[j] = data.x[i][col_map[j]];
            if (override_col >= 0) input[override_col] = xs;
            msum += w * predict_mars(model, input);
            wsum += w;
        }
        PdpPoint point;
        point.x = xs;
        if (wsum > 0.0 && std::isfinite(msum / wsum)) {
            point.value = msum / wsum;
        } else {
            point.defined = false;
        }
        curve.push_back(point);
    }
    return curve;
}

} // namespace tsplab

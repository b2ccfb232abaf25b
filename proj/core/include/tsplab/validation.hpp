#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tsplab/dataset.hpp"
#include "tsplab/mars.hpp"
#include "tsplab/rng.hpp"

namespace tsplab {

struct CvResult {
    double mean_metric = 0.0;
    std::vector<double> fold_metrics;
};

/// Trains on `train` and scores on `test`: accuracy for classifiers, RMSE for
/// regressors.
using FoldEvaluator = std::function<double(const Dataset& train, const Dataset& test)>;

/// k-fold cross-validation. Classification rows are dealt stratified so every
/// fold sees both classes; regression rows are shuffled and dealt round-robin.
/// Requires 2 <= k <= rows. Deterministic for a fixed rng state.
CvResult cross_validate(const Dataset& data, const FoldEvaluator& learner, int k, RngStream& rng);

FoldEvaluator tree_accuracy(int max_depth, int min_leaf);
FoldEvaluator mars_rmse(int max_terms, int max_degree = 2);
FoldEvaluator mean_predictor_rmse();

struct FsConfig {
    double threshold = std::sqrt(5e-5);
    int outer_k = 10;
    int mars_max_terms = 9; // inner learner size; keeps the candidate scans tractable
    int max_features = 8;
};

struct SelectionStep {
    std::string feature; // empty for the step-0 mean-predictor baseline
    double inner_rmse = 0.0;
};

struct SelectionTrace {
    std::vector<SelectionStep> steps; // mean inner RMSE per step across outer folds
    std::vector<std::vector<std::string>> fold_selections;
    std::vector<std::string> final_features; // chosen by at least half the folds
    std::vector<double> outer_fold_rmse;
    double outer_rmse = 0.0;
};

/// Nested-resampling forward search. Outer k-fold CV; within each outer
/// training set, features are added greedily while the MARS RMSE on a
/// 2/3-1/3 holdout improves by at least `threshold`. Each outer fold then
/// refits on its full training split with its selected features and is scored
/// on the held-out fold, giving an unbiased outer RMSE.
SelectionTrace forward_feature_selection(const Dataset& data, const FsConfig& cfg, RngStream& rng);

nlohmann::json to_json(const SelectionTrace& trace);

struct PdpPoint {
    double x = 0.0;
    double value = 0.0;
    bool defined = true;
};

/// Gaussian-weighted partial dependence of `model` on `feature` over `grid`:
/// each grid point averages the model's predictions with the feature
/// overridden, weighting every row by how close its own feature value lies.
/// Grid points whose total weight underflows to zero come back undefined.
std::vector<PdpPoint> weighted_partial_dependence(const MarsModel& model, const Dataset& data,
                                                  const std::string& feature,
                                                  const std::vector<double>& grid);

} // namespace tsplab

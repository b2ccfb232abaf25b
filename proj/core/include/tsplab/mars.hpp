#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "tsplab/dataset.hpp"

namespace tsplab {

/// One hinge max(0, dir * (x[feature] - knot)) with dir in {-1, +1}.
struct HingeFactor {
    int feature = 0;
    double knot = 0.0;
    int dir = 1;
};

/// Product of hinges scaled by a fitted coefficient.
struct MarsTerm {
    double coef = 0.0;
    std::vector<HingeFactor> factors;
};

/// Piecewise-linear regression surface: intercept plus hinge-product terms.
struct MarsModel {
    std::vector<std::string> columns;
    double intercept = 0.0;
    std::vector<MarsTerm> terms;
};

/// Grows hinge terms forward in reflected pairs, then prunes back to the
/// subset with the lowest generalized cross-validation score.
///
/// Candidate knots are the distinct sample values of a feature over the rows
/// where the parent term is active; a term multiplies at most `max_degree`
/// hinges and never reuses a feature. Tied candidates resolve to the earliest
/// parent, then the lowest feature index, then the smallest knot, and tied
/// GCV scores during pruning keep the smaller model.
///
/// Requires a regression target and at least ten rows.
MarsModel fit_mars(const Dataset& data, int max_terms = 45, int max_degree = 2);

double predict_mars(const MarsModel& model, const std::vector<double>& x);

nlohmann::json to_json(const MarsModel& model);
MarsModel mars_from_json(const nlohmann::json& j);

} // namespace tsplab

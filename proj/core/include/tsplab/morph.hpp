#pragma once

#include <utility>
#include <vector>

#include "tsplab/instance.hpp"
#include "tsplab/rng.hpp"

namespace tsplab {

struct Matching {
    std::vector<int> assignment; // assignment[i] = index in b matched to a's point i
    double total_distance = 0.0;
};

/// Repeatedly match the globally closest unmatched pair of points; distance
/// ties fall to the lexicographically smallest index pair.
Matching greedy_point_matching(const Instance& a, const Instance& b);

/// Uniformly random bijection (baseline for the greedy matcher).
Matching random_point_matching(const Instance& a, const Instance& b, RngStream& rng);

struct MorphParams {
    int cells = 100;
    RoundingScheme rounding_scheme = RoundingScheme::nrnd;
    double normal_mutation_rate = 0.01;
    double normal_mutation_sd = 0.025;
};

inline constexpr double kDefaultAlphas[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

/// Convex combination alpha*hard + (1-alpha)*matched easy, then rescale and
/// grid rounding; the rnd scheme adds normal mutation and boundary clamping.
/// alpha=1 reproduces the processed hard instance, alpha=0 the processed
/// easy one.
Instance morph(const Instance& hard, const Instance& easy, double alpha, const MorphParams& params,
               RngStream& rng);

/// One morph per alpha, sharing a single greedy matching so the path through
/// instance space is continuous.
std::vector<std::pair<double, Instance>> morph_sequence(const Instance& hard,
                                                        const Instance& easy,
                                                        const std::vector<double>& alphas,
                                                        const MorphParams& params, RngStream& rng);

} // namespace tsplab

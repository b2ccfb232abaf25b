#pragma once

#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "tsplab/geometry.hpp"
#include "tsplab/rng.hpp"

namespace tsplab {

/// Thrown when an exact solve is requested above the instance-size cap.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultExactCap = 20;
inline constexpr int kBruteForceCap = 10;

struct SolveResult {
    Tour tour;
    double length = 0.0;
    int iterations = 0; // improving exchanges applied (0 for exact solvers)
};

/// Rotate so city 0 comes first and pick the direction with the smaller
/// second city. Tours describing the same cycle map to the same vector, so
/// their recomputed lengths agree bit for bit.
Tour canonical_tour(Tour t);

/// Uniformly random permutation (Fisher-Yates).
Tour random_tour(int n, RngStream& rng);

/// Best-improvement 2-opt: every pass scans all N(N-3)/2 segment reversals
/// and applies the single exchange with the largest reduction, until no
/// exchange gains more than 1e-12. Ties go to the lexicographically smallest
/// index pair, so the walk is fully deterministic in the start tour.
SolveResult two_opt(const DistanceMatrix& dm, const Tour& start);

/// Held-Karp dynamic programming. Provably optimal, memory 2^(N-1)*(N-1)
/// entries; sizes above `cap` are rejected.
SolveResult exact_tour(const DistanceMatrix& dm, int cap = kDefaultExactCap);

/// Exhaustive minimum over all (N-1)!/2 distinct cyclic tours. Test oracle,
/// capped at N=10.
SolveResult brute_force_tour(const DistanceMatrix& dm);

struct FitnessValue {
    double ratio = 0.0;           // mean 2-opt length / optimal length
    int repetitions = 0;
    double optimal_length = 0.0;
    std::vector<double> lengths;  // per-repetition 2-opt tour lengths
    std::vector<int> swaps;       // per-repetition improving exchange counts
};

nlohmann::json to_json(const FitnessValue& f);

/// Approximation quality of 2-opt on this instance: run two_opt from
/// `repetitions` independent random start tours and divide the mean final
/// length by the optimal length. Repetition r draws from rng.child(r), so the
/// result does not depend on evaluation order.
FitnessValue compute_fitness(const Instance& inst, int repetitions, RngStream& rng,
                             int exact_cap = kDefaultExactCap);

/// Same, with the distance matrix and optimal length already known (the
/// evolutionary loop caches optima across generations).
FitnessValue compute_fitness(const DistanceMatrix& dm, double optimal_length, int repetitions,
                             RngStream& rng);

} // namespace tsplab

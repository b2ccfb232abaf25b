#pragma once

#include <string>
#include <vector>

#include "tsplab/rng.hpp"

namespace tsplab {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// A Euclidean TSP instance: N labeled cities in the plane.
/// The generation pipeline keeps coordinates inside the unit square.
struct Instance {
    std::string name;
    std::vector<Point> points;

    int size() const { return static_cast<int>(points.size()); }
};

/// Order of grid rounding relative to the normal-mutation step in the
/// generation pipeline: nrnd rounds after all mutation (points end exactly
/// on cell centers), rnd mutates after rounding (grid plus small jitter).
enum class RoundingScheme { rnd, nrnd };

const char* to_string(RoundingScheme s);
RoundingScheme rounding_scheme_from_string(const std::string& s);

/// n cities drawn coordinate-wise uniform on [0,1). Throws std::invalid_argument if n == 0.
Instance random_instance(int n, RngStream& rng);

struct RescaleResult {
    Instance instance;
    // Set when an axis had zero range and was mapped to the constant 0.5.
    bool degenerate_x = false;
    bool degenerate_y = false;
};

/// Per-axis min-max normalization so each axis spans exactly [0,1].
/// A zero-range axis maps to 0.5 and is flagged instead of raising; mid-run
/// offspring of clustered parents can be degenerate and the caller must be
/// able to continue.
RescaleResult rescale(const Instance& inst);

/// Snap every coordinate to the center of its cell in a cells x cells grid
/// over the unit square: c -> (floor(c*cells) + 0.5)/cells, with coordinates
/// at exactly 1.0 clamped into the top cell. Expects inputs in [0,1].
Instance round_to_grid(const Instance& inst, int cells);

/// Each city independently with probability `rate` gets N(0, sd) noise added
/// to both coordinates. May leave the unit square; callers follow up with
/// cut_to_boundary or rescale.
Instance normal_mutation(const Instance& inst, double rate, double sd, RngStream& rng);

/// Each city independently with probability `rate` has both coordinates
/// redrawn uniform on [0,1).
Instance uniform_mutation(const Instance& inst, double rate, RngStream& rng);

/// Positionwise uniform crossover: offspring city i is parent a's or b's
/// city i with probability 1/2 each. Sizes must match.
Instance uniform_crossover(const Instance& a, const Instance& b, RngStream& rng);

/// Clamp every coordinate to [0,1].
Instance cut_to_boundary(const Instance& inst);

} // namespace tsplab

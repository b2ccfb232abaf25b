#pragma once

#include <vector>

#include "tsplab/instance.hpp"

namespace tsplab {

/// Full symmetric Euclidean edge-cost matrix with zero diagonal.
/// Instance sizes stay in the hundreds, so O(N^2) storage is fine.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    const double* row(int i) const { return d_.data() + static_cast<std::size_t>(i) * n_; }

  private:
    int n_ = 0;
    std::vector<double> d_;
};

/// Permutation of {0..N-1}, read cyclically (last city connects back to first).
using Tour = std::vector<int>;

DistanceMatrix distance_matrix(const Instance& inst);

/// Cyclic tour length including the closing edge. Throws if t is not a
/// permutation of {0..N-1}.
double tour_length(const DistanceMatrix& dm, const Tour& t);

bool is_permutation_tour(const Tour& t, int n);

struct MstEdge {
    int parent;
    int child;
    double weight;
};

struct Mst {
    std::vector<MstEdge> edges; // N-1 edges in insertion order
    std::vector<int> depth;     // hop count from the root, depth[root] == 0
    int root = 0;
    double total_weight = 0.0;
};

/// Prim's algorithm from the given root (node 0 by default). Ties on the
/// candidate key are broken toward the lower node index, which makes the
/// construction deterministic.
Mst minimum_spanning_tree(const DistanceMatrix& dm, int root = 0);

struct ConvexHull {
    std::vector<int> indices; // counter-clockwise; collinear edge-interior points excluded
    double area = 0.0;        // shoelace area, 0 for degenerate (collinear) input
};

/// Counter-clockwise convex hull (monotone chain). Points interior to a hull
/// edge do not count as hull members, so hull membership is stable on
/// grid-rounded instances full of collinear triples. An all-collinear input
/// degenerates to the two extreme points with area 0. Requires N >= 3.
ConvexHull convex_hull(const Instance& inst);

} // namespace tsplab

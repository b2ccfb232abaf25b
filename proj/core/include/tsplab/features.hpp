#pragma once

#include <array>
#include <string>
#include <vector>

#include "tsplab/geometry.hpp"
#include "tsplab/instance.hpp"

namespace tsplab {

inline constexpr int kFeatureCount = 47;

/// 47 structural instance features in the canonical order: distance (8),
/// mode (4), cluster (6), nearest-neighbor (6), centroid (5), MST (11),
/// angle (5), convex hull (2).
using FeatureVector = std::array<double, kFeatureCount>;

/// Canonical feature names, index-aligned with FeatureVector.
const std::vector<std::string>& feature_names();

/// Index of a named feature, -1 if unknown.
int feature_index(const std::string& name);

/// distance_min, distance_max, distance_mean, distance_median,
/// distance_prop_below_mean, distance_distinct_fraction, distance_sd,
/// distance_mean_tour_length. Statistics over the N(N-1)/2 unordered edge
/// costs; the last is the expected random-tour length, edge sum * 2/(N-1).
std::array<double, 8> distance_features(const DistanceMatrix& dm);

/// mode_number, mode_quantity, mode_frequency, mode_mean. KDE over edge
/// costs (Gaussian kernel, Silverman bandwidth, 512-point grid on
/// [min, max]): mode_number counts strict local maxima, mode_mean their mean
/// location, mode_frequency the mean density there. mode_quantity counts
/// local maxima of a plain 10-bin histogram instead. All-equal costs
/// degenerate to (1, 1, 1, cost).
std::array<double, 4> mode_features(const DistanceMatrix& dm);

/// Density-based clustering. Core points have at least min_pts other points
/// within eps; cores within eps of each other share a cluster; a non-core
/// point joins the cluster of its nearest core within eps; the rest is noise
/// (-1). Labels are renumbered by ascending lowest member index, and border
/// assignment is by distance, so the labeling is stable under reordering of
/// the point list.
std::vector<int> gdbscan(const Instance& inst, double eps, int min_pts);

/// cluster_{01,05,10}pct_number_of_clusters then
/// cluster_{01,05,10}pct_mean_distance_to_centroid, from gdbscan at
/// eps = 0.01 / 0.05 / 0.1 with min_pts = 3. No clusters at a level -> 0, 0.
std::array<double, 6> cluster_features(const Instance& inst);

/// nnds_min, nnds_max, nnds_mean, nnds_median, nnds_sd, nnds_cv over
/// per-node nearest-neighbor distances normalized by their maximum (so
/// nnds_max is 1 whenever the instance is non-degenerate).
std::array<double, 6> nnd_features(const Instance& inst);

/// centroid_x, centroid_y, then min/mean/max node-to-centroid distance.
std::array<double, 5> centroid_features(const Instance& inst);

/// mst_depth_{min,mean,median,max,sd} over node depths,
/// mst_dists_{min,mean,median,max,sd} over edge weights, and mst_dists_sum =
/// MST weight / sum of all pairwise distances. The tree is rooted at the
/// lexicographically smallest point so depth statistics do not depend on
/// point order.
std::array<double, 11> mst_features(const Instance& inst);

/// angle_min, angle_mean, angle_median, angle_max, angle_sd over the angle
/// at each node between its two nearest neighbors (0 when a neighbor
/// coincides with the node).
std::array<double, 5> angle_features(const Instance& inst);

/// chull_area, chull_points_on_hull (hull vertex fraction of N).
std::array<double, 2> hull_features(const Instance& inst);

/// All eight groups concatenated in canonical order. Requires N >= 4.
FeatureVector extract_features(const Instance& inst);

} // namespace tsplab

#include "tsplab/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "tsplab/stats.hpp"

namespace tsplab {

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {
        "distance_min", "distance_max", "distance_mean", "distance_median",
        "distance_prop_below_mean", "distance_distinct_fraction", "distance_sd",
        "distance_mean_tour_length",
        "mode_number", "mode_quantity", "mode_frequency", "mode_mean",
        "cluster_01pct_number_of_clusters", "cluster_05pct_number_of_clusters",
        "cluster_10pct_number_of_clusters", "cluster_01pct_mean_distance_to_centroid",
        "cluster_05pct_mean_distance_to_centroid", "cluster_10pct_mean_distance_to_centroid",
        "nnds_min", "nnds_max", "nnds_mean", "nnds_median", "nnds_sd", "nnds_cv",
        "centroid_x", "centroid_y", "centroid_min_distance_to_centroid",
        "centroid_mean_distance_to_centroid", "centroid_max_distance_to_centroid",
        "mst_depth_min", "mst_depth_mean", "mst_depth_median", "mst_depth_max", "mst_depth_sd",
        "mst_dists_min", "mst_dists_mean", "mst_dists_median", "mst_dists_max", "mst_dists_sd",
        "mst_dists_sum",
        "angle_min", "angle_mean", "angle_median", "angle_max", "angle_sd",
        "chull_area", "chull_points_on_hull"};
    return names;
}

int feature_index(const std::string& name) {
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i)
        if (names[i] == name) return i;
    return -1;
}

namespace {

std::vector<double> edge_costs(const DistanceMatrix& dm) {
    const int n = dm.size();
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back(dm(i, j));
    return e;
}

double point_dist(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Linear-interpolation quantile on a sorted sample (the common statistical
// "type 7" convention).
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

// Rule-of-thumb bandwidth: 0.9 * min(sd, IQR/1.34) * n^(-1/5), falling back
// to sd, then |x0|, then 1 when the spread estimate degenerates to zero.
double silverman_bandwidth(const std::vector<double>& x) {
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double sd = sample_sd(x);
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) {
        if (sd > 0.0)
            spread = sd;
        else if (std::abs(x[0]) > 0.0)
            spread = std::abs(x[0]);
        else
            spread = 1.0;
    }
    return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

// Strict local maxima; an endpoint counts when strictly above its single
// neighbor. Returns indices in ascending order.
template <typename T>
std::vector<int> strict_local_maxima(const std::vector<T>& y) {
    const int n = static_cast<int>(y.size());
    std::vector<int> peaks;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || y[i] > y[i - 1];
        const bool right_ok = (i == n - 1) || y[i] > y[i + 1];
        if (n >= 2 && left_ok && right_ok) peaks.push_back(i);
    }
    return peaks;
}

} // namespace

std::array<double, 8> distance_features(const DistanceMatrix& dm) {
    const int n = dm.size();
    if (n < 2) throw std::invalid_argument("distance_features: need at least 2 points");
    const std::vector<double> costs = edge_costs(dm);
    const double m = mean(costs);

    int below = 0;
    double sum = 0.0;
    for (double c : costs) {
        if (c < m) ++below;
        sum += c;
    }

    std::vector<double> sorted = costs;
    std::sort(sorted.begin(), sorted.end());
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] != sorted[i - 1]) ++distinct;

    const double ecount = static_cast<double>(costs.size());
    return {costs.empty() ? 0.0 : sorted.front(),
            sorted.back(),
            m,
            median(costs),
            static_cast<double>(below) / ecount,
            static_cast<double>(distinct) / ecount,
            sample_sd(costs),
            sum * 2.0 / static_cast<double>(n - 1)};
}

std::array<double, 4> mode_features(const DistanceMatrix& dm) {
    const int n = dm.size();
    if (n < 3) throw std::invalid_argument("mode_features: need at least 3 points");
    const std::vector<double> costs = edge_costs(dm);
    const double lo = vec_min(costs);
    const double hi = vec_max(costs);
    if (hi == lo) return {1.0, 1.0, 1.0, lo};

    constexpr int kGrid = 512;
    const double bw = silverman_bandwidth(costs);
    const double norm =
        1.0 / (static_cast<double>(costs.size()) * bw * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> grid(kGrid);
    std::vector<double> dens(kGrid);
    for (int g = 0; g < kGrid; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / (kGrid - 1);
        double acc = 0.0;
        for (double c : costs) {
            const double u = (x - c) / bw;
            acc += std::exp(-0.5 * u * u);
        }
        grid[g] = x;
        dens[g] = acc * norm;
    }

    std::vector<int> peaks = strict_local_maxima(dens);
    if (peaks.empty())
        peaks.push_back(static_cast<int>(
            std::max_element(dens.begin(), dens.end()) - dens.begin()));
    std::vector<double> locs;
    std::vector<double> heights;
    for (int p : peaks) {
        locs.push_back(grid[p]);
        heights.push_back(dens[p]);
    }

    constexpr int kBins = 10;
    std::vector<int> counts(kBins, 0);
    for (double c : costs) {
        int b = static_cast<int>((c - lo) / (hi - lo) * kBins);
        counts[std::min(b, kBins - 1)] += 1;
    }
    std::vector<int> hist_peaks = strict_local_maxima(counts);
    const int mode_quantity = hist_peaks.empty() ? 1 : static_cast<int>(hist_peaks.size());

    return {static_cast<double>(peaks.size()), static_cast<double>(mode_quantity),
            mean(heights), mean(locs)};
}

std::vector<int> gdbscan(const Instance& inst, double eps, int min_pts) {
    if (eps <= 0.0) throw std::invalid_argument("gdbscan: eps must be positive");
    if (min_pts <= 0) throw std::invalid_argument("gdbscan: min_pts must be positive");
    const int n = inst.size();
    const auto& pts = inst.points;

    std::vector<std::vector<int>> nb(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (point_dist(pts[i], pts[j]) <= eps) {
                nb[i].push_back(j);
                nb[j].push_back(i);
            }
        }
    }
    std::vector<bool> core(n, false);
    for (int i = 0; i < n; ++i) core[i] = static_cast<int>(nb[i].size()) >= min_pts;

    // Cluster the core points by BFS over core-core adjacency.
    std::vector<int> label(n, -1);
    int next_label = 0;
    std::vector<int> queue;
    for (int i = 0; i < n; ++i) {
        if (!core[i] || label[i] >= 0) continue;
        label[i] = next_label;
        queue.assign(1, i);
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            for (int v : nb[u]) {
                if (core[v] && label[v] < 0) {
                    label[v] = next_label;
                    queue.push_back(v);
                }
            }
        }
        ++next_label;
    }

    // A border point joins the cluster of its geometrically nearest core so
    // the partition does not depend on the point order; exact distance ties
    // fall to the core with the lexicographically smaller coordinates.
    for (int i = 0; i < n; ++i) {
        if (core[i]) continue;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v : nb[i]) {
            if (!core[v]) continue;
            const double d = point_dist(pts[i], pts[v]);
            const bool closer =
                d < best_d ||
                (d == best_d && best >= 0 &&
                 (pts[v].x < pts[best].x ||
                  (pts[v].x == pts[best].x && pts[v].y < pts[best].y)));
            if (best < 0 || closer) {
                best = v;
                best_d = d;
            }
        }
        if (best >= 0) label[i] = label[best];
    }

    // Renumber clusters by ascending lowest member index.
    std::vector<int> first(next_label, n);
    for (int i = 0; i < n; ++i)
        if (label[i] >= 0) first[label[i]] = std::min(first[label[i]], i);
    std::vector<int> order(next_label);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return first[a] < first[b]; });
    std::vector<int> remap(next_label);
    for (int r = 0; r < next_label; ++r) remap[order[r]] = r;
    for (int i = 0; i < n; ++i)
        if (label[i] >= 0) label[i] = remap[label[i]];
    return label;
}

std::array<double, 6> cluster_features(const Instance& inst) {
    if (inst.size() < 3) throw std::invalid_argument("cluster_features: need at least 3 points");
    const double eps_levels[3] = {0.01, 0.05, 0.1};
    std::array<double, 6> out{};
    for (int k = 0; k < 3; ++k) {
        const std::vector<int> labels = gdbscan(inst, eps_levels[k], 3);
        int nclusters = 0;
        for (int l : labels) nclusters = std::max(nclusters, l + 1);
        out[k] = static_cast<double>(nclusters);
        if (nclusters == 0) continue;

        std::vector<double> cx(nclusters, 0.0);
        std::vector<double> cy(nclusters, 0.0);
        std::vector<int> count(nclusters, 0);
        for (int i = 0; i < inst.size(); ++i) {
            if (labels[i] < 0) continue;
            cx[labels[i]] += inst.points[i].x;
            cy[labels[i]] += inst.points[i].y;
            count[labels[i]] += 1;
        }
        for (int c = 0; c < nclusters; ++c) {
            cx[c] /= count[c];
            cy[c] /= count[c];
        }
        double total = 0.0;
        int clustered = 0;
        for (int i = 0; i < inst.size(); ++i) {
            if (labels[i] < 0) continue;
            total += point_dist(inst.points[i], Point{cx[labels[i]], cy[labels[i]]});
            ++clustered;
        }
        out[3 + k] = total / clustered;
    }
    return out;
}

std::array<double, 6> nnd_features(const Instance& inst) {
    const int n = inst.size();
    if (n < 2) throw std::invalid_argument("nnd_features: need at least 2 points");
    std::vector<double> nnd(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            nnd[i] = std::min(nnd[i], point_dist(inst.points[i], inst.points[j]));
        }
    }
    const double mx = vec_max(nnd);
    if (mx == 0.0) return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (double& v : nnd) v /= mx;
    const double m = mean(nnd);
    const double sd = sample_sd(nnd);
    return {vec_min(nnd), vec_max(nnd), m, median(nnd), sd, sd / m};
}

std::array<double, 5> centroid_features(const Instance& inst) {
    const int n = inst.size();
    if (n < 1) throw std::invalid_argument("centroid_features: empty instance");
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = inst.points[i].x;
        ys[i] = inst.points[i].y;
    }
    const Point c{mean(xs), mean(ys)};
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = point_dist(inst.points[i], c);
    return {c.x, c.y, vec_min(d), mean(d), vec_max(d)};
}

std::array<double, 11> mst_features(const Instance& inst) {
    const int n = inst.size();
    if (n < 2) throw std::invalid_argument("mst_features: need at least 2 points");
    const DistanceMatrix dm = distance_matrix(inst);

    int root = 0;
    for (int i = 1; i < n; ++i) {
        const Point& p = inst.points[i];
        const Point& r = inst.points[root];
        if (p.x < r.x || (p.x == r.x && p.y < r.y)) root = i;
    }
    const Mst mst = minimum_spanning_tree(dm, root);

    std::vector<double> depths(n);
    for (int i = 0; i < n; ++i) depths[i] = static_cast<double>(mst.depth[i]);
    std::vector<double> weights;
    weights.reserve(mst.edges.size());
    for (const MstEdge& e : mst.edges) weights.push_back(e.weight);

    double pair_sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pair_sum += dm(i, j);
    const double sum_ratio = pair_sum > 0.0 ? mst.total_weight / pair_sum : 0.0;

    return {vec_min(depths), mean(depths), median(depths), vec_max(depths), sample_sd(depths),
            vec_min(weights), mean(weights), median(weights), vec_max(weights),
            sample_sd(weights), sum_ratio};
}

std::array<double, 5> angle_features(const Instance& inst) {
    const int n = inst.size();
    if (n < 3) throw std::invalid_argument("angle_features: need at least 3 points");
    const auto& pts = inst.points;
    std::vector<double> angles(n);
    for (int v = 0; v < n; ++v) {
        int j1 = -1, j2 = -1;
        double d1 = 0.0, d2 = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == v) continue;
            const double d = point_dist(pts[v], pts[j]);
            if (j1 < 0 || d < d1) {
                j2 = j1;
                d2 = d1;
                j1 = j;
                d1 = d;
            } else if (j2 < 0 || d < d2) {
                j2 = j;
                d2 = d;
            }
        }
        const double ax = pts[j1].x - pts[v].x;
        const double ay = pts[j1].y - pts[v].y;
        const double bx = pts[j2].x - pts[v].x;
        const double by = pts[j2].y - pts[v].y;
        const double na = std::sqrt(ax * ax + ay * ay);
        const double nb = std::sqrt(bx * bx + by * by);
        if (na == 0.0 || nb == 0.0) {
            angles[v] = 0.0;
        } else {
            const double c = std::clamp((ax * bx + ay * by) / (na * nb), -1.0, 1.0);
            angles[v] = std::acos(c);
        }
    }
    return {vec_min(angles), mean(angles), median(angles), vec_max(angles), sample_sd(angles)};
}

std::array<double, 2> hull_features(const Instance& inst) {
    const ConvexHull hull = convex_hull(inst);
    return {hull.area, static_cast<double>(hull.indices.size()) / inst.size()};
}

FeatureVector extract_features(const Instance& inst) {
    if (inst.size() < 4) throw std::invalid_argument("extract_features: need at least 4 points");
    const DistanceMatrix dm = distance_matrix(inst);
    const auto dist = distance_features(dm);
    const auto mode = mode_features(dm);
    const auto clus = cluster_features(inst);
    const auto nnd = nnd_features(inst);
    const auto cent = centroid_features(inst);
    const auto mst = mst_features(inst);
    const auto ang = angle_features(inst);
    const auto hull = hull_features(inst);

    FeatureVector f{};
    int k = 0;
    for (double v : dist) f[k++] = v;
    for (double v : mode) f[k++] = v;
    for (double v : clus) f[k++] = v;
    for (double v : nnd) f[k++] = v;
    for (double v : cent) f[k++] = v;
    for (double v : mst) f[k++] = v;
    for (double v : ang) f[k++] = v;
    for (double v : hull) f[k++] = v;
    return f;
}

} // namespace tsplab

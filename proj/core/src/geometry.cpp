#include "tsplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsplab {

DistanceMatrix distance_matrix(const Instance& inst) {
    const int n = inst.size();
    if (n < 2) throw std::invalid_argument("distance_matrix: need at least 2 points");
    DistanceMatrix dm(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = inst.points[i].x - inst.points[j].x;
            const double dy = inst.points[i].y - inst.points[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            dm(i, j) = d;
            dm(j, i) = d;
        }
    }
    return dm;
}

bool is_permutation_tour(const Tour& t, int n) {
    if (static_cast<int>(t.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int c : t) {
        if (c < 0 || c >= n || seen[c]) return false;
        seen[c] = true;
    }
    return true;
}

double tour_length(const DistanceMatrix& dm, const Tour& t) {
    const int n = dm.size();
    if (!is_permutation_tour(t, n))
        throw std::invalid_argument("tour_length: tour is not a permutation of the cities");
    double len = 0.0;
    for (int i = 0; i + 1 < n; ++i) len += dm(t[i], t[i + 1]);
    len += dm(t[n - 1], t[0]);
    return len;
}

Mst minimum_spanning_tree(const DistanceMatrix& dm, int root) {
    const int n = dm.size();
    if (n < 1) throw std::invalid_argument("minimum_spanning_tree: empty matrix");
    if (root < 0 || root >= n) throw std::invalid_argument("minimum_spanning_tree: root out of range");

    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n, -1);
    std::vector<bool> done(n, false);
    Mst mst;
    mst.root = root;
    mst.depth.assign(n, 0);
    key[root] = 0.0;

    for (int it = 0; it < n; ++it) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (!done[v] && (u == -1 || key[v] < key[u])) u = v;
        }
        done[u] = true;
        if (parent[u] >= 0) {
            mst.edges.push_back({parent[u], u, key[u]});
            mst.depth[u] = mst.depth[parent[u]] + 1;
            mst.total_weight += key[u];
        }
        const double* row = dm.row(u);
        for (int v = 0; v < n; ++v) {
            if (!done[v] && row[v] < key[v]) {
                key[v] = row[v];
                parent[v] = u;
            }
        }
    }
    return mst;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

} // namespace

ConvexHull convex_hull(const Instance& inst) {
    const int n = inst.size();
    if (n < 3) throw std::invalid_argument("convex_hull: need at least 3 points");
    constexpr double eps = 1e-12;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Point& pa = inst.points[a];
        const Point& pb = inst.points[b];
        if (pa.x != pb.x) return pa.x < pb.x;
        if (pa.y != pb.y) return pa.y < pb.y;
        return a < b;
    });

    auto build = [&](auto begin, auto end) {
        std::vector<int> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross(inst.points[chain[chain.size() - 2]], inst.points[chain.back()],
                         inst.points[*it]) <= eps) {
                chain.pop_back();
            }
            chain.push_back(*it);
        }
        return chain;
    };

    std::vector<int> lower = build(order.begin(), order.end());
    std::vector<int> upper = build(order.rbegin(), order.rend());

    ConvexHull hull;
    hull.indices = std::move(lower);
    if (hull.indices.size() >= 2 &&
        inst.points[hull.indices.front()].x == inst.points[hull.indices.back()].x &&
        inst.points[hull.indices.front()].y == inst.points[hull.indices.back()].y) {
        // All points coincide; keep a single representative.
        hull.indices.resize(1);
    } else {
        hull.indices.insert(hull.indices.end(), upper.begin() + 1, upper.end() - 1);
    }

    if (hull.indices.size() >= 3) {
        double twice_area = 0.0;
        for (std::size_t i = 0; i < hull.indices.size(); ++i) {
            const Point& a = inst.points[hull.indices[i]];
            const Point& b = inst.points[hull.indices[(i + 1) % hull.indices.size()]];
            twice_area += a.x * b.y - a.y * b.x;
        }
        hull.area = std::abs(twice_area) / 2.0;
    }
    return hull;
}

} // namespace tsplab

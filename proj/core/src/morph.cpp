#include "tsplab/morph.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tsplab {

namespace {

double point_dist(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

void require_same_size(const Instance& a, const Instance& b, const char* what) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": instance sizes differ");
}

} // namespace

Matching greedy_point_matching(const Instance& a, const Instance& b) {
    require_same_size(a, b, "greedy_point_matching");
    const int n = a.size();
    Matching m;
    m.assignment.assign(n, -1);
    std::vector<bool> a_done(n, false);
    std::vector<bool> b_done(n, false);
    for (int round = 0; round < n; ++round) {
        int bi = -1;
        int bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (a_done[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (b_done[j]) continue;
                const double d = point_dist(a.points[i], b.points[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        m.assignment[bi] = bj;
        a_done[bi] = true;
        b_done[bj] = true;
        m.total_distance += best;
    }
    return m;
}

Matching random_point_matching(const Instance& a, const Instance& b, RngStream& rng) {
    require_same_size(a, b, "random_point_matching");
    const int n = a.size();
    Matching m;
    m.assignment.resize(n);
    std::iota(m.assignment.begin(), m.assignment.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(m.assignment[i], m.assignment[j]);
    }
    for (int i = 0; i < n; ++i)
        m.total_distance += point_dist(a.points[i], b.points[m.assignment[i]]);
    return m;
}

namespace {

Instance morph_matched(const Instance& hard, const Instance& easy, const Matching& matching,
                       double alpha, const MorphParams& params, RngStream& rng) {
    Instance combo;
    combo.points.resize(hard.points.size());
    for (int i = 0; i < hard.size(); ++i) {
        const Point& h = hard.points[i];
        const Point& e = easy.points[matching.assignment[i]];
        combo.points[i] = Point{alpha * h.x + (1.0 - alpha) * e.x,
                                alpha * h.y + (1.0 - alpha) * e.y};
    }
    combo = rescale(combo).instance;
    combo = round_to_grid(combo, params.cells);
    if (params.rounding_scheme == RoundingScheme::rnd) {
        combo = normal_mutation(combo, params.normal_mutation_rate, params.normal_mutation_sd,
                                rng);
        combo = cut_to_boundary(combo);
    }
    return combo;
}

} // namespace

Instance morph(const Instance& hard, const Instance& easy, double alpha,
               const MorphParams& params, RngStream& rng) {
    require_same_size(hard, easy, "morph");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("morph: alpha must be in [0, 1]");
    const Matching matching = greedy_point_matching(hard, easy);
    return morph_matched(hard, easy, matching, alpha, params, rng);
}

std::vector<std::pair<double, Instance>> morph_sequence(const Instance& hard,
                                                        const Instance& easy,
                                                        const std::vector<double>& alphas,
                                                        const MorphParams& params,
                                                        RngStream& rng) {
    require_same_size(hard, easy, "morph_sequence");
    if (alphas.empty()) throw std::invalid_argument("morph_sequence: no alpha levels given");
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("morph_sequence: alpha must be in [0, 1]");

    const Matching matching = greedy_point_matching(hard, easy);
    std::vector<std::pair<double, Instance>> out;
    out.reserve(alphas.size());
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        RngStream sub = rng.child(k);
        out.emplace_back(alphas[k], morph_matched(hard, easy, matching, alphas[k], params, sub));
    }
    return out;
}

} // namespace tsplab

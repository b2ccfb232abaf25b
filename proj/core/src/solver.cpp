#include "tsplab/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "tsplab/stats.hpp"

namespace tsplab {

Tour canonical_tour(Tour t) {
    if (t.empty()) return t;
    auto it = std::find(t.begin(), t.end(), 0);
    std::rotate(t.begin(), it, t.end());
    if (t.size() >= 3 && t[1] > t.back()) std::reverse(t.begin() + 1, t.end());
    return t;
}

Tour random_tour(int n, RngStream& rng) {
    if (n < 3) throw std::invalid_argument("random_tour: need at least 3 cities");
    Tour t(n);
    std::iota(t.begin(), t.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(t[i], t[j]);
    }
    return t;
}

SolveResult two_opt(const DistanceMatrix& dm, const Tour& start) {
    const int n = dm.size();
    if (!is_permutation_tour(start, n))
        throw std::invalid_argument("two_opt: start is not a valid tour");
    constexpr double kGainEps = 1e-12;

    Tour t = start;
    int iterations = 0;
    for (;;) {
        double best_gain = kGainEps;
        int bi = -1;
        int bj = -1;
        for (int i = 0; i + 2 < n; ++i) {
            const int a = t[i];
            const int b = t[i + 1];
            const double dab = dm(a, b);
            const int jmax = (i == 0) ? n - 2 : n - 1;
            for (int j = i + 2; j <= jmax; ++j) {
                const int c = t[j];
                const int d = t[(j + 1) % n];
                const double gain = dab + dm(c, d) - dm(a, c) - dm(b, d);
                if (gain > best_gain) {
                    best_gain = gain;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) break;
        std::reverse(t.begin() + bi + 1, t.begin() + bj + 1);
        ++iterations;
    }
    const double len = tour_length(dm, t);
    return {std::move(t), len, iterations};
}

SolveResult exact_tour(const DistanceMatrix& dm, int cap) {
    const int n = dm.size();
    if (n < 3) throw std::invalid_argument("exact_tour: need at least 3 cities");
    if (n > cap)
        throw CapacityError("exact_tour: instance size " + std::to_string(n) +
                            " exceeds the exact solver cap of " + std::to_string(cap));

    const int m = n - 1;
    const std::size_t full = std::size_t{1} << m;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full * m, inf);
    std::vector<std::int8_t> parent(full * m, -1);

    for (int k = 0; k < m; ++k) dp[(std::size_t{1} << k) * m + k] = dm(0, k + 1);

    for (std::size_t mask = 1; mask < full; ++mask) {
        const std::size_t base = mask * m;
        for (int k = 0; k < m; ++k) {
            if (!(mask & (std::size_t{1} << k))) continue;
            const double cur = dp[base + k];
            if (cur == inf) continue;
            const double* row = dm.row(k + 1);
            for (int j = 0; j < m; ++j) {
                if (mask & (std::size_t{1} << j)) continue;
                const std::size_t idx = (mask | (std::size_t{1} << j)) * m + j;
                const double cand = cur + row[j + 1];
                if (cand < dp[idx]) {
                    dp[idx] = cand;
                    parent[idx] = static_cast<std::int8_t>(k);
                }
            }
        }
    }

    const std::size_t base = (full - 1) * m;
    int best_k = -1;
    double best = inf;
    for (int k = 0; k < m; ++k) {
        const double cand = dp[base + k] + dm(k + 1, 0);
        if (cand < best) {
            best = cand;
            best_k = k;
        }
    }

    Tour rev;
    std::size_t mask = full - 1;
    int k = best_k;
    while (k >= 0) {
        rev.push_back(k + 1);
        const int pk = parent[mask * m + k];
        mask ^= std::size_t{1} << k;
        k = pk;
    }
    Tour t;
    t.reserve(n);
    t.push_back(0);
    t.insert(t.end(), rev.rbegin(), rev.rend());
    t = canonical_tour(std::move(t));
    const double len = tour_length(dm, t);
    return {std::move(t), len, 0};
}

SolveResult brute_force_tour(const DistanceMatrix& dm) {
    const int n = dm.size();
    if (n < 3) throw std::invalid_argument("brute_force_tour: need at least 3 cities");
    if (n > kBruteForceCap)
        throw CapacityError("brute_force_tour: instance size " + std::to_string(n) +
                            " exceeds the brute-force cap of " + std::to_string(kBruteForceCap));

    Tour perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Tour best_tour;
    double best = std::numeric_limits<double>::infinity();
    do {
        if (perm[1] > perm[n - 1]) continue; // each cycle once: skip mirrored direction
        double len = 0.0;
        for (int i = 0; i + 1 < n; ++i) len += dm(perm[i], perm[i + 1]);
        len += dm(perm[n - 1], perm[0]);
        if (len < best) {
            best = len;
            best_tour = perm;
        }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    const double len = tour_length(dm, best_tour);
    return {std::move(best_tour), len, 0};
}

nlohmann::json to_json(const FitnessValue& f) {
    return nlohmann::json{{"ratio", f.ratio},
                          {"optimal_length", f.optimal_length},
                          {"repetitions", f.repetitions},
                          {"lengths", f.lengths},
                          {"swaps", f.swaps}};
}

FitnessValue compute_fitness(const DistanceMatrix& dm, double optimal_length, int repetitions,
                             RngStream& rng) {
    if (repetitions <= 0)
        throw std::invalid_argument("compute_fitness: repetitions must be positive");
    const int n = dm.size();
    FitnessValue f;
    f.repetitions = repetitions;
    f.optimal_length = optimal_length;
    f.lengths.resize(repetitions);
    f.swaps.resize(repetitions);
    for (int r = 0; r < repetitions; ++r) {
        RngStream sub = rng.child(static_cast<std::uint64_t>(r));
        const Tour start = random_tour(n, sub);
        SolveResult res = two_opt(dm, start);
        // Measure on the canonical form: equal cycles then yield bitwise-equal
        // lengths, so the mean over identical local optima is exact.
        f.lengths[r] = tour_length(dm, canonical_tour(std::move(res.tour)));
        f.swaps[r] = res.iterations;
    }
    f.ratio = mean(f.lengths) / optimal_length;
    return f;
}

FitnessValue compute_fitness(const Instance& inst, int repetitions, RngStream& rng,
                             int exact_cap) {
    const DistanceMatrix dm = distance_matrix(inst);
    const SolveResult opt = exact_tour(dm, exact_cap);
    return compute_fitness(dm, opt.length, repetitions, rng);
}

} // namespace tsplab

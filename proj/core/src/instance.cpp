#include "tsplab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsplab {

const char* to_string(RoundingScheme s) { return s == RoundingScheme::rnd ? "rnd" : "nrnd"; }

RoundingScheme rounding_scheme_from_string(const std::string& s) {
    if (s == "rnd") return RoundingScheme::rnd;
    if (s == "nrnd") return RoundingScheme::nrnd;
    throw std::invalid_argument("unknown rounding scheme: " + s);
}

Instance random_instance(int n, RngStream& rng) {
    if (n <= 0) throw std::invalid_argument("random_instance: n must be positive");
    Instance inst;
    inst.points.resize(n);
    for (auto& p : inst.points) {
        p.x = rng.uniform();
        p.y = rng.uniform();
    }
    return inst;
}

RescaleResult rescale(const Instance& inst) {
    if (inst.size() < 2) throw std::invalid_argument("rescale: need at least 2 points");
    double min_x = inst.points[0].x, max_x = min_x;
    double min_y = inst.points[0].y, max_y = min_y;
    for (const auto& p : inst.points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    RescaleResult out;
    out.instance.name = inst.name;
    out.degenerate_x = (max_x == min_x);
    out.degenerate_y = (max_y == min_y);
    const double rx = max_x - min_x;
    const double ry = max_y - min_y;
    out.instance.points.reserve(inst.points.size());
    for (const auto& p : inst.points) {
        Point q;
        q.x = out.degenerate_x ? 0.5 : (p.x - min_x) / rx;
        q.y = out.degenerate_y ? 0.5 : (p.y - min_y) / ry;
        out.instance.points.push_back(q);
    }
    return out;
}

Instance round_to_grid(const Instance& inst, int cells) {
    if (cells <= 0) throw std::invalid_argument("round_to_grid: cells must be positive");
    const double c = static_cast<double>(cells);
    auto snap = [&](double v) {
        auto k = static_cast<long long>(std::floor(v * c));
        k = std::clamp(k, 0LL, static_cast<long long>(cells) - 1);
        return (static_cast<double>(k) + 0.5) / c;
    };
    Instance out;
    out.name = inst.name;
    out.points.reserve(inst.points.size());
    for (const auto& p : inst.points) out.points.push_back({snap(p.x), snap(p.y)});
    return out;
}

Instance normal_mutation(const Instance& inst, double rate, double sd, RngStream& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("normal_mutation: rate not in [0,1]");
    if (sd < 0.0) throw std::invalid_argument("normal_mutation: sd must be nonnegative");
    Instance out = inst;
    for (auto& p : out.points) {
        if (rng.uniform() < rate) {
            p.x += rng.normal(0.0, sd);
            p.y += rng.normal(0.0, sd);
        }
    }
    return out;
}

Instance uniform_mutation(const Instance& inst, double rate, RngStream& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("uniform_mutation: rate not in [0,1]");
    Instance out = inst;
    for (auto& p : out.points) {
        if (rng.uniform() < rate) {
            p.x = rng.uniform();
            p.y = rng.uniform();
        }
    }
    return out;
}

Instance uniform_crossover(const Instance& a, const Instance& b, RngStream& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("uniform_crossover: parent sizes differ");
    Instance out;
    out.points.reserve(a.points.size());
    for (int i = 0; i < a.size(); ++i)
        out.points.push_back(rng.uniform() < 0.5 ? a.points[i] : b.points[i]);
    return out;
}

Instance cut_to_boundary(const Instance& inst) {
    Instance out = inst;
    for (auto& p : out.points) {
        p.x = std::clamp(p.x, 0.0, 1.0);
        p.y = std::clamp(p.y, 0.0, 1.0);
    }
    return out;
}

} // namespace tsplab

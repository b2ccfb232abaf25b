#include "tsplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace tsplab {

namespace {

// splitmix64 finalizer; used both to whiten seeds and to combine path ids.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t key, std::uint64_t id) {
    return mix64(key ^ (id + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2)));
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : key_(mix64(seed)), engine_(key_) {}

RngStream::RngStream(std::uint64_t key, int) : key_(key), engine_(key) {}

RngStream RngStream::child(std::uint64_t id) const { return RngStream(combine(key_, id), 0); }

std::uint64_t RngStream::below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
}

double RngStream::normal(double mean, double sd) {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace tsplab

#pragma once

#include <cstdint>
#include <random>

namespace tsplab {

/// Seedable random stream with cheap derivation of independent substreams.
///
/// A stream is identified by a 64-bit seed plus the path of child() calls
/// that produced it, e.g. root.child(kFitness).child(generation).child(k).
/// Identical (seed, path) always yields the identical sequence, no matter
/// which thread consumes it, so randomized work can be farmed out without
/// losing bit-reproducibility. Substream derivation uses the stream's key,
/// not the engine state, so deriving children never disturbs the parent.
///
/// The uniform/normal transforms are implemented here (rather than via
/// std::*_distribution) to keep output sequences stable across standard
/// library versions.
class RngStream {
  public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed);

    /// Derive the substream identified by appending `id` to this stream's path.
    RngStream child(std::uint64_t id) const;
    RngStream child(std::uint64_t a, std::uint64_t b) const { return child(a).child(b); }
    RngStream child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
        return child(a).child(b).child(c);
    }

    /// Next raw 64 random bits.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias. n > 0.
    std::uint64_t below(std::uint64_t n);

    /// Normal deviate via Box-Muller; consumes exactly two uniforms.
    double normal(double mean, double sd);

    std::uint64_t key() const { return key_; }

  private:
    RngStream(std::uint64_t key, int /*tag*/);

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace tsplab

#pragma once

#include <cstdint>
#include <span>

namespace tensorlab {

/// Counter-based pseudorandom generator: the SplitMix64 output function
/// (Steele, Lea & Flood 2014) applied to key + i * golden, i = 1, 2, ...
/// Identical seeds produce identical uint64 streams on every platform, and
/// any position of the stream can be computed independently, so bulk fills
/// are chunkable without changing the result.
///
/// Gaussian variates come from the Box-Muller transform on consecutive
/// counter pairs; entry pair (2k, 2k+1) always consumes uniforms (2k, 2k+1)
/// of the stream, whether generated one by one or via fill_gaussian.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed) {}

    /// Stream for a sub-task: base_seed ^ mix(stream_index). Distinct indices
    /// give statistically independent non-overlapping streams.
    static Rng derive(std::uint64_t base_seed, std::uint64_t stream_index);

    static std::uint64_t mix(std::uint64_t x);

    std::uint64_t seed() const { return key_; }

    std::uint64_t next_u64() { return at(counter_++); }

    /// Uniform double in (0, 1], 53-bit resolution.
    double next_uniform() { return to_unit(next_u64()); }

    /// Standard normal variate.
    double next_gaussian();

    /// Fills out with standard normal variates. Equivalent to calling
    /// next_gaussian() out.size() times from a fresh pair boundary, except
    /// that a trailing odd half-pair is dropped rather than cached.
    void fill_gaussian(std::span<double> out);

private:
    std::uint64_t at(std::uint64_t i) const;
    static double to_unit(std::uint64_t x);
    void gaussian_pair(std::uint64_t pair_base, double& z0, double& z1) const;

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace tensorlab

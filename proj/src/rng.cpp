#include "tensorlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace tensorlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Rng::mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t base_seed, std::uint64_t stream_index) {
    return Rng(base_seed ^ mix(stream_index * kGolden + 1));
}

std::uint64_t Rng::at(std::uint64_t i) const { return mix(key_ + (i + 1) * kGolden); }

double Rng::to_unit(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

void Rng::gaussian_pair(std::uint64_t pair_base, double& z0, double& z1) const {
    const double u1 = to_unit(at(pair_base));
    const double u2 = to_unit(at(pair_base + 1));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
}

double Rng::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double z0, z1;
    gaussian_pair(counter_, z0, z1);
    counter_ += 2;
    cached_ = z1;
    has_cached_ = true;
    return z0;
}

void Rng::fill_gaussian(std::span<double> out) {
    has_cached_ = false;
    std::size_t i = 0;
    for (; i + 1 < out.size(); i += 2) {
        gaussian_pair(counter_, out[i], out[i + 1]);
        counter_ += 2;
    }
    if (i < out.size()) {
        double z0, z1;
        gaussian_pair(counter_, z0, z1);
        counter_ += 2;
        out[i] = z0;
    }
}

}  // namespace tensorlab

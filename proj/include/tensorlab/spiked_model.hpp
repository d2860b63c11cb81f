#pragma once

#include "tensorlab/linalg.hpp"
#include "tensorlab/rng.hpp"

#include <cstdint>
#include <vector>

namespace tensorlab {

/// Core tensor plus one orthonormal factor per mode: the Tucker form shared
/// by the planted signal, MLSVD output and HOOI iterates.
struct TuckerFactors {
    DenseTensor core;
    std::vector<OrthonormalBasis> factors;

    TuckerFactors(DenseTensor core_, std::vector<OrthonormalBasis> factors_);

    std::vector<Index> ambient_dims() const;
    std::vector<Index> ranks() const { return core.shape(); }
};

/// Expands the Tucker form to a full tensor.
DenseTensor full_tensor(const TuckerFactors& f);

/// One sampled draw of the spiked model: observed = full(signal) + noise/sqrt(N),
/// with the ground-truth factors retained for alignment measurement.
struct SpikedInstance {
    TuckerFactors signal;
    DenseTensor observed;
    Index n_param;
    double omega;
    std::uint64_t seed;
};

/// Haar-distributed n x r orthonormal basis (orthonormalized Gaussian matrix).
OrthonormalBasis haar_basis(Index n, Index r, Rng& rng);

/// Random low-multilinear-rank signal: i.i.d. Gaussian core rescaled so that
/// ||core||_F^2 = omega * sigma_N exactly, with Haar factor matrices.
TuckerFactors make_signal(std::span<const Index> dims, std::span<const Index> ranks,
                          Index n_param, double omega, Rng& rng);

/// Observation T = full(signal) + G / sqrt(N) with G i.i.d. standard normal.
/// Records the rng seed for reproducibility.
SpikedInstance sample_observation(const TuckerFactors& signal, Index n_param, Rng& rng);

/// Squared singular values of the mode-`mode` unfolding of full(signal),
/// non-increasing. Equal to the spectrum of the core unfolding because the
/// factors are orthonormal.
std::vector<double> signal_sv_sq(const TuckerFactors& signal, Index mode);

}  // namespace tensorlab

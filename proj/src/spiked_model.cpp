#include "tensorlab/spiked_model.hpp"

#include "tensorlab/rmt.hpp"

#include <cmath>
#include <stdexcept>

namespace tensorlab {

TuckerFactors::TuckerFactors(DenseTensor core_, std::vector<OrthonormalBasis> factors_)
    : core(std::move(core_)), factors(std::move(factors_)) {
    if (static_cast<Index>(factors.size()) != core.order()) {
        throw std::invalid_argument("need one factor per core mode");
    }
    for (Index l = 0; l < core.order(); ++l) {
        if (factors[static_cast<std::size_t>(l)].cols() != core.dim(l)) {
            throw std::invalid_argument("factor column count does not match core dimension");
        }
    }
}

std::vector<Index> TuckerFactors::ambient_dims() const {
    std::vector<Index> dims;
    dims.reserve(factors.size());
    for (const auto& f : factors) dims.push_back(f.rows());
    return dims;
}

DenseTensor full_tensor(const TuckerFactors& f) {
    std::vector<Matrix> mats;
    mats.reserve(f.factors.size());
    for (const auto& b : f.factors) mats.push_back(b.matrix());
    return tucker_to_full(f.core, mats);
}

OrthonormalBasis haar_basis(Index n, Index r, Rng& rng) {
    if (r < 1 || r > n) throw std::invalid_argument("haar_basis requires 1 <= r <= n");
    Matrix g(n, r);
    std::vector<double> buf(static_cast<std::size_t>(n * r));
    rng.fill_gaussian(buf);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < r; ++j) g(i, j) = buf[static_cast<std::size_t>(i * r + j)];
    }
    return orthonormalize(g);
}

TuckerFactors make_signal(std::span<const Index> dims, std::span<const Index> ranks,
                          Index n_param, double omega, Rng& rng) {
    if (dims.size() != ranks.size() || dims.empty()) {
        throw std::invalid_argument("dims and ranks must have the same non-zero length");
    }
    for (std::size_t l = 0; l < dims.size(); ++l) {
        if (ranks[l] > dims[l]) throw std::invalid_argument("rank exceeds dimension");
    }
    if (omega < 0.0) throw std::invalid_argument("omega must be >= 0");

    DenseTensor core(std::vector<Index>(ranks.begin(), ranks.end()));
    rng.fill_gaussian({core.data(), static_cast<std::size_t>(core.size())});
    const double sigma = scales(dims, n_param, 0).sigma;
    const double raw = frob_norm(core);
    const double target = std::sqrt(omega * sigma);
    const double scale = raw > 0.0 ? target / raw : 0.0;
    for (Index i = 0; i < core.size(); ++i) core[i] *= scale;

    std::vector<OrthonormalBasis> factors;
    factors.reserve(dims.size());
    for (std::size_t l = 0; l < dims.size(); ++l) {
        factors.push_back(haar_basis(dims[l], ranks[l], rng));
    }
    return TuckerFactors(std::move(core), std::move(factors));
}

SpikedInstance sample_observation(const TuckerFactors& signal, Index n_param, Rng& rng) {
    const std::uint64_t seed = rng.seed();
    DenseTensor observed = full_tensor(signal);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_param));

    std::vector<double> noise(static_cast<std::size_t>(observed.size()));
    rng.fill_gaussian(noise);
    double* out = observed.data();
    for (std::size_t i = 0; i < noise.size(); ++i) out[i] += inv_sqrt_n * noise[i];

    const auto dims = signal.ambient_dims();
    const double sigma = scales(dims, n_param, 0).sigma;
    const double core_energy = frob_norm(signal.core);
    const double omega = core_energy * core_energy / sigma;
    return SpikedInstance{signal, std::move(observed), n_param, omega, seed};
}

std::vector<double> signal_sv_sq(const TuckerFactors& signal, Index mode) {
    const Matrix gram = mode_gram(signal.core, mode);
    const SpectralResult res = gram_eigen(gram, gram.rows());
    std::vector<double> out(static_cast<std::size_t>(res.values.size()));
    for (Index q = 0; q < res.values.size(); ++q) {
        out[static_cast<std::size_t>(q)] = std::max(0.0, res.values[q]);
    }
    return out;
}

}  // namespace tensorlab

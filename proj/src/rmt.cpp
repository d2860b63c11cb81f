#include "tensorlab/rmt.hpp"

#include "tensorlab/spiked_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tensorlab {

ScalePair scales(std::span<const Index> dims, Index n_param, Index mode) {
    if (dims.empty()) throw std::invalid_argument("dims must be non-empty");
    if (mode < 0 || mode >= static_cast<Index>(dims.size())) {
        throw std::invalid_argument("mode out of range");
    }
    if (n_param < 1) throw std::invalid_argument("N must be >= 1");
    const double n = static_cast<double>(n_param);
    double mu = 1.0 / n;
    double prod_sqrt = 1.0;
    for (std::size_t l = 0; l < dims.size(); ++l) {
        prod_sqrt *= std::sqrt(static_cast<double>(dims[l]));
        if (static_cast<Index>(l) != mode) mu *= static_cast<double>(dims[l]);
    }
    return ScalePair{mu, prod_sqrt / n};
}

SpikePrediction spike_prediction(double s_sq, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    if (s_sq < 0.0) throw std::invalid_argument("squared singular value must be >= 0");
    SpikePrediction p;
    p.rho = s_sq / sigma;
    if (p.rho > 1.0) {
        p.xi = p.rho + 1.0 / p.rho;
        p.zeta_plus = 1.0 - 1.0 / (p.rho * p.rho);
    }
    return p;
}

std::optional<double> raw_spike_position(const SpikePrediction& p, const ScalePair& s) {
    if (!p.xi) return std::nullopt;
    return s.mu + s.sigma * *p.xi;
}

double predicted_mean_alignment(std::span<const double> signal_sv_sq, double sigma) {
    if (signal_sv_sq.empty()) throw std::invalid_argument("need at least one singular value");
    double sum = 0.0;
    for (double s_sq : signal_sv_sq) sum += spike_prediction(s_sq, sigma).zeta_plus;
    return sum / static_cast<double>(signal_sv_sq.size());
}

double semicircle_pdf(double x) {
    const double disc = 4.0 - x * x;
    if (disc <= 0.0) return 0.0;
    return std::sqrt(disc) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + (x * std::sqrt(4.0 - x * x) + 4.0 * std::asin(0.5 * x)) / (4.0 * std::numbers::pi);
}

std::complex<double> stieltjes_sc(std::complex<double> z) {
    if (z.imag() == 0.0 && std::abs(z.real()) <= 2.0) {
        throw std::domain_error("z lies inside the semicircle support");
    }
    const std::complex<double> w = std::sqrt(z * z - 4.0);
    // Evaluate the larger root without cancellation; the roots multiply to 1,
    // so the smaller one follows by reciprocal. Exactly one of the two
    // satisfies the Stieltjes branch condition.
    const std::complex<double> big =
        std::norm(z + w) >= std::norm(z - w) ? -0.5 * (z + w) : 0.5 * (w - z);
    const std::complex<double> small = 1.0 / big;
    if (z.imag() != 0.0) {
        return z.imag() * small.imag() > 0.0 ? small : big;
    }
    return std::abs(small) <= 1.0 ? small : big;
}

EsdSample make_esd(const Vector& eigenvalues, const ScalePair& s) {
    EsdSample esd;
    esd.values.reserve(static_cast<std::size_t>(eigenvalues.size()));
    for (Index i = 0; i < eigenvalues.size(); ++i) {
        esd.values.push_back((eigenvalues[i] - s.mu) / s.sigma);
    }
    return esd;
}

double ks_distance(const EsdSample& esd) {
    if (esd.values.empty()) throw std::invalid_argument("empty ESD sample");
    std::vector<double> sorted = esd.values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = semicircle_cdf(sorted[i]);
        sup = std::max(sup, std::abs(static_cast<double>(i + 1) / n - f));
        sup = std::max(sup, std::abs(static_cast<double>(i) / n - f));
    }
    return sup;
}

int count_outliers(const EsdSample& esd, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    int count = 0;
    for (double v : esd.values) {
        if (v > 2.0 + epsilon) ++count;
    }
    return count;
}

double noise_contraction_bound(std::span<const Index> dims, std::span<const Index> ranks,
                               double delta, double c_universal) {
    if (dims.size() != ranks.size() || dims.empty()) {
        throw std::invalid_argument("dims and ranks must have the same non-zero length");
    }
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must lie in (0, 1)");
    if (c_universal <= 0.0) throw std::invalid_argument("c must be positive");
    const double d = static_cast<double>(dims.size());
    double stiefel_dims = 0.0;
    double rank_prod = 1.0;
    for (std::size_t l = 0; l < dims.size(); ++l) {
        const double n = static_cast<double>(dims[l]);
        const double r = static_cast<double>(ranks[l]);
        stiefel_dims += r * (n - 0.5 * (r + 1.0));
        rank_prod *= r;
    }
    const double covering = std::log(c_universal * d / std::log(1.5));
    const double tail = std::log((1.0 / delta) * std::max(1.0, std::exp(0.5 * rank_prod - 1.0)));
    return 16.0 * (stiefel_dims * covering + tail);
}

double hooi_convergence_diagnostic(const TuckerFactors& signal,
                                   const std::vector<OrthonormalBasis>& inits) {
    const Index d = signal.core.order();
    if (static_cast<Index>(inits.size()) != d) {
        throw std::invalid_argument("need one init basis per mode");
    }
    const auto dims = signal.ambient_dims();
    for (Index l = 0; l < d; ++l) {
        if (inits[static_cast<std::size_t>(l)].rows() != dims[static_cast<std::size_t>(l)]) {
            throw std::invalid_argument("init ambient dimension mismatch");
        }
    }
    const DenseTensor full = full_tensor(signal);
    double best = std::numeric_limits<double>::infinity();
    for (Index l = 0; l < d; ++l) {
        const Index r_l = signal.core.dim(l);
        for (Index q = 0; q < r_l; ++q) {
            std::vector<Matrix> mats;
            mats.reserve(static_cast<std::size_t>(d));
            for (Index k = 0; k < d; ++k) {
                if (k == l) {
                    mats.push_back(signal.factors[static_cast<std::size_t>(k)].matrix().col(q));
                } else {
                    mats.push_back(inits[static_cast<std::size_t>(k)].matrix());
                }
            }
            best = std::min(best, frob_norm(contract(full, mats)));
        }
    }
    return best;
}

}  // namespace tensorlab

#include "tensorlab/decomposition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tensorlab {

namespace {

void check_ranks(const DenseTensor& t, std::span<const Index> ranks) {
    if (static_cast<Index>(ranks.size()) != t.order()) {
        throw std::invalid_argument("need one target rank per mode");
    }
    for (Index l = 0; l < t.order(); ++l) {
        const Index r = ranks[static_cast<std::size_t>(l)];
        if (r < 1 || r > t.dim(l)) throw std::invalid_argument("rank exceeds dimension");
    }
}

// T contracted on every factor except `skip`.
DenseTensor contract_all_but(const DenseTensor& t, const std::vector<OrthonormalBasis>& factors,
                             Index skip) {
    std::vector<Matrix> mats;
    mats.reserve(factors.size());
    for (Index l = 0; l < t.order(); ++l) {
        if (l == skip) {
            mats.push_back(Matrix::Identity(t.dim(l), t.dim(l)));
        } else {
            mats.push_back(factors[static_cast<std::size_t>(l)].matrix());
        }
    }
    return contract(t, mats);
}

DenseTensor core_of(const DenseTensor& t, const std::vector<OrthonormalBasis>& factors) {
    std::vector<Matrix> mats;
    mats.reserve(factors.size());
    for (const auto& f : factors) mats.push_back(f.matrix());
    return contract(t, mats);
}

// Dominant left subspace of the mode-`mode` unfolding of the (small) partial
// contraction. The unfolding is tall with at most prod(other ranks) columns,
// so the cheap side of the Gram is the column one: eigendecompose M^T M and
// lift the top right singular vectors back through M. Falls back to the
// row-Gram route when the matrix is wide or numerically rank-deficient.
SpectralResult hooi_mode_update(const DenseTensor& partial, Index mode, Index r) {
    const Matrix m = unfold(partial, mode);
    if (m.cols() > m.rows()) return gram_eigen(mode_gram(partial, mode), r);
    const Matrix small = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(small);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigendecomposition failed to converge");
    }
    const Index k = small.rows();
    Vector values(r);
    Matrix lifted(m.rows(), r);
    for (Index q = 0; q < r; ++q) {
        values[q] = solver.eigenvalues()[k - 1 - q];
        lifted.col(q) = m * solver.eigenvectors().col(k - 1 - q);
    }
    try {
        return SpectralResult{std::move(values), orthonormalize(lifted)};
    } catch (const std::invalid_argument&) {
        // Degenerate trailing singular values: the row Gram handles them.
        return gram_eigen(mode_gram(partial, mode), r);
    }
}

}  // namespace

TuckerFactors truncated_mlsvd(const DenseTensor& t, std::span<const Index> ranks) {
    check_ranks(t, ranks);
    std::vector<OrthonormalBasis> factors;
    factors.reserve(ranks.size());
    for (Index l = 0; l < t.order(); ++l) {
        SpectralResult res = gram_eigen(mode_gram(t, l), ranks[static_cast<std::size_t>(l)]);
        factors.push_back(std::move(res.basis));
    }
    DenseTensor core = core_of(t, factors);
    return TuckerFactors(std::move(core), std::move(factors));
}

HooiReport hooi(const DenseTensor& t, std::span<const Index> ranks,
                const std::optional<TuckerFactors>& init, const HooiOptions& options) {
    check_ranks(t, ranks);
    if (options.tol <= 0.0) throw std::invalid_argument("tol must be positive");
    if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    std::vector<OrthonormalBasis> factors;
    if (init) {
        if (init->core.shape() != std::vector<Index>(ranks.begin(), ranks.end()) ||
            init->ambient_dims() != t.shape()) {
            throw std::invalid_argument("init does not match tensor dims and target ranks");
        }
        factors = init->factors;
    } else {
        factors = truncated_mlsvd(t, ranks).factors;
    }

    std::vector<double> trace;
    trace.push_back(frob_norm(core_of(t, factors)));

    bool converged = false;
    int iterations = 0;
    for (int sweep = 0; sweep < options.max_iter; ++sweep) {
        const std::vector<OrthonormalBasis> previous = factors;
        double objective = trace.back();
        for (Index l = 0; l < t.order(); ++l) {
            const auto& source = options.jacobi_updates ? previous : factors;
            const DenseTensor partial = contract_all_but(t, source, l);
            SpectralResult res = hooi_mode_update(partial, l, ranks[static_cast<std::size_t>(l)]);
            factors[static_cast<std::size_t>(l)] = std::move(res.basis);
            if (!options.jacobi_updates && l == t.order() - 1) {
                // Gauss-Seidel only: after the last in-place update the core is
                // the projection of this partial, so its energy is the sum of
                // the retained eigenvalues.
                objective = std::sqrt(std::max(0.0, res.values.sum()));
            }
        }
        if (options.jacobi_updates) {
            objective = frob_norm(core_of(t, factors));
        }
        if (!std::isfinite(objective)) throw std::runtime_error("HOOI objective is not finite");
        const double previous_objective = trace.back();
        trace.push_back(objective);
        ++iterations;
        const double denom = std::max(previous_objective, std::numeric_limits<double>::min());
        if (std::abs(objective - previous_objective) / denom < options.tol) {
            converged = true;
            break;
        }
    }

    DenseTensor core = core_of(t, factors);
    return HooiReport{TuckerFactors(std::move(core), std::move(factors)), iterations,
                      std::move(trace), converged};
}

DenseTensor reconstruct(const TuckerFactors& f) { return full_tensor(f); }

double reconstruction_error(const DenseTensor& t, const TuckerFactors& f) {
    DenseTensor approx = reconstruct(f);
    if (approx.shape() != t.shape()) throw std::invalid_argument("shape mismatch");
    double sum = 0.0;
    const double* a = t.data();
    const double* b = approx.data();
    for (Index i = 0; i < t.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

DenseTensor core_proportionality_check(const TuckerFactors& estimate, const TuckerFactors& truth,
                                       double floor_rel) {
    if (estimate.ranks() != truth.ranks()) throw std::invalid_argument("rank mismatch");
    const Index d = estimate.core.order();
    std::vector<Matrix> rotations;
    rotations.reserve(static_cast<std::size_t>(d));
    for (Index l = 0; l < d; ++l) {
        const Matrix cross = truth.factors[static_cast<std::size_t>(l)].matrix().transpose() *
                             estimate.factors[static_cast<std::size_t>(l)].matrix();
        Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
        rotations.push_back(svd.matrixV() * svd.matrixU().transpose());
    }
    const DenseTensor aligned = contract(estimate.core, rotations);

    double max_abs = 0.0;
    for (Index i = 0; i < truth.core.size(); ++i) {
        max_abs = std::max(max_abs, std::abs(truth.core[i]));
    }
    const double floor = floor_rel * max_abs;
    DenseTensor ratios(truth.core.shape());
    for (Index i = 0; i < truth.core.size(); ++i) {
        const double h = truth.core[i];
        ratios[i] = std::abs(h) > floor ? aligned[i] / h
                                        : std::numeric_limits<double>::quiet_NaN();
    }
    return ratios;
}

}  // namespace tensorlab

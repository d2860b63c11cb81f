#pragma once

#include "tensorlab/spiked_model.hpp"

#include <optional>
#include <vector>

namespace tensorlab {

struct HooiOptions {
    double tol = 1e-8;   // relative change of ||core||_F
    int max_iter = 100;  // sweeps
    bool jacobi_updates = false;  // update all modes from the previous sweep
};

/// Outcome of a HOOI run. objective_trace[t] is ||T(U_t^(1), ..., U_t^(d))||_F
/// including t = 0 (the initialization), so iterations == trace size - 1.
struct HooiReport {
    TuckerFactors factors;
    int iterations = 0;
    std::vector<double> objective_trace;
    bool converged = false;
};

/// Truncated MLSVD: factor l gathers the r_l dominant left singular vectors
/// of the mode-l unfolding; core = T(U^(1), ..., U^(d)).
TuckerFactors truncated_mlsvd(const DenseTensor& t, std::span<const Index> ranks);

/// Higher-order orthogonal iteration on ||T(U^(1), ..., U^(d))||_F^2 over the
/// Stiefel manifolds. Sweeps are Gauss-Seidel by default: within a sweep,
/// mode l uses the freshest factors available. Initialized with the truncated
/// MLSVD when no init is given. Stops on a negligible relative change of the
/// core norm or after max_iter sweeps.
HooiReport hooi(const DenseTensor& t, std::span<const Index> ranks,
                const std::optional<TuckerFactors>& init = std::nullopt,
                const HooiOptions& options = {});

/// Expands the Tucker form back to a full tensor.
DenseTensor reconstruct(const TuckerFactors& f);

/// || t - reconstruct(f) ||_F.
double reconstruction_error(const DenseTensor& t, const TuckerFactors& f);

/// Diagnostic for core recovery: rotates the estimated factors onto the truth
/// (orthogonal Procrustes per mode), then returns entrywise ratios
/// estimated_core / truth_core. Entries of the truth core smaller in absolute
/// value than floor_rel * max|truth| give NaN.
DenseTensor core_proportionality_check(const TuckerFactors& estimate, const TuckerFactors& truth,
                                       double floor_rel = 1e-8);

}  // namespace tensorlab

#pragma once

#include "tensorlab/linalg.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace tensorlab {

struct TuckerFactors;

/// Centering/scaling constants of the mode-`mode` Gram spectrum:
/// mu = (1/N) prod_{l' != mode} n_{l'} and sigma = (1/N) sqrt(prod_l n_l).
/// sigma carries no mode index; the identity sigma^2 == mu * n_mode / N holds.
struct ScalePair {
    double mu;
    double sigma;
};

ScalePair scales(std::span<const Index> dims, Index n_param, Index mode);

/// Per-direction prediction: rho = s^2/sigma is the SNR; above the rho > 1
/// threshold the Gram spectrum shows an isolated eigenvalue at mu + sigma*xi
/// with xi = rho + 1/rho, and the matching eigenvector aligns with the signal
/// subspace at [zeta]^+ = max(0, 1 - 1/rho^2).
struct SpikePrediction {
    double rho = 0.0;
    std::optional<double> xi;  // present iff rho > 1
    double zeta_plus = 0.0;
};

SpikePrediction spike_prediction(double s_sq, double sigma);

/// Predicted raw eigenvalue location mu + sigma * xi, when a spike exists.
std::optional<double> raw_spike_position(const SpikePrediction& p, const ScalePair& s);

/// (1/r) sum_q max(0, 1 - (sigma/s_q^2)^2) for the given squared signal
/// singular values; the limit of the mean subspace alignment.
double predicted_mean_alignment(std::span<const double> signal_sv_sq, double sigma);

/// Semicircle density (1/2pi) sqrt([4 - x^2]^+).
double semicircle_pdf(double x);

/// Closed-form semicircle CDF: 1/2 + (x sqrt(4-x^2) + 4 asin(x/2)) / (4 pi)
/// on [-2, 2], clamped outside.
double semicircle_cdf(double x);

/// The root of m^2 + z m + 1 = 0 with Im(z) Im(m) > 0 off the real axis; for
/// real |x| > 2 the decaying root with |m| < 1. Throws for real z in [-2, 2].
std::complex<double> stieltjes_sc(std::complex<double> z);

/// Centered-and-scaled eigenvalue sample (lambda - mu) / sigma.
struct EsdSample {
    std::vector<double> values;
};

EsdSample make_esd(const Vector& eigenvalues, const ScalePair& s);

/// Kolmogorov-Smirnov distance between the sample and the semicircle CDF.
double ks_distance(const EsdSample& esd);

/// Number of entries above 2 + epsilon.
int count_outliers(const EsdSample& esd, double epsilon);

/// High-probability bound on sup ||N(A^(1), ..., A^(d))||_F^2 over Stiefel
/// matrices, for an i.i.d. standard normal tensor N:
/// 16 [ (sum_l r_l (n_l - (r_l+1)/2)) log(c d / log(3/2))
///      + log( (1/delta) max(1, e^{prod_l r_l / 2 - 1}) ) ].
/// The universal constant c is not quantified by the theory; it is an
/// explicit parameter here.
double noise_contraction_bound(std::span<const Index> dims, std::span<const Index> ranks,
                               double delta, double c_universal);

/// L_N = min over modes l and directions q of
/// || P(U^(1), ..., x^(l)_q, ..., U^(d)) ||_F, the first-iteration
/// convergence diagnostic for HOOI initialized at the given bases.
double hooi_convergence_diagnostic(const TuckerFactors& signal,
                                   const std::vector<OrthonormalBasis>& inits);

}  // namespace tensorlab

#pragma once

#include "tensorlab/tensor.hpp"

#include <vector>

namespace tensorlab {

/// Max-norm tolerance on Q^T Q - I accepted by OrthonormalBasis.
inline constexpr double kOrthoTol = 1e-10;

/// An n x r matrix with orthonormal columns (an element of the Stiefel
/// manifold V_r(R^n)). Validates on construction.
class OrthonormalBasis {
public:
    explicit OrthonormalBasis(Matrix q);

    const Matrix& matrix() const { return q_; }
    Index rows() const { return q_.rows(); }
    Index cols() const { return q_.cols(); }

private:
    Matrix q_;
};

/// Eigen/singular quantities in non-increasing order with the matching basis.
struct SpectralResult {
    Vector values;
    OrthonormalBasis basis;
};

/// Top `top_count` eigenpairs of a symmetric positive semi-definite Gram
/// matrix, values non-increasing.
SpectralResult gram_eigen(const Matrix& gram, Index top_count);

/// Top-r eigenpairs of M M^T: values are squared singular values of M, basis
/// columns its dominant left singular vectors. Always goes through the small
/// rows x rows Gram matrix, never an SVD of the (typically very long) input.
SpectralResult dominant_left_subspace(const Matrix& m, Index r);

/// All rows(M) eigenvalues of M M^T, non-increasing; basis is the full
/// eigenvector matrix. Used for ESD histograms.
SpectralResult full_gram_spectrum(const Matrix& m);

/// unfold(t, mode) * unfold(t, mode)^T computed slab-by-slab without
/// materializing the unfolding.
Matrix mode_gram(const DenseTensor& t, Index mode);

/// QR-based orthonormalization with the R diagonal forced positive, so the
/// output is deterministic. Requires cols <= rows and full column rank.
OrthonormalBasis orthonormalize(const Matrix& m);

/// Principal angles between the spans, in [0, pi/2], non-decreasing. The
/// cosines are the singular values of X^T U, clamped to [0, 1].
std::vector<double> principal_angles(const OrthonormalBasis& x, const OrthonormalBasis& u);

/// (1/r) ||X^T U||_F^2 = (1/r) sum_q cos^2(theta_q), in [0, 1]. Invariant
/// under right-orthogonal transformations of either basis.
double mean_alignment(const OrthonormalBasis& x, const OrthonormalBasis& u);

}  // namespace tensorlab

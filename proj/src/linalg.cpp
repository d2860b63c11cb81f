#include "tensorlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tensorlab {

OrthonormalBasis::OrthonormalBasis(Matrix q) : q_(std::move(q)) {
    if (q_.rows() < q_.cols() || q_.cols() < 1) {
        throw std::invalid_argument("orthonormal basis must be tall, n >= r >= 1");
    }
    Matrix gram = q_.transpose() * q_;
    gram.diagonal().array() -= 1.0;
    if (gram.cwiseAbs().maxCoeff() > kOrthoTol) {
        throw std::invalid_argument("columns are not orthonormal");
    }
}

SpectralResult gram_eigen(const Matrix& gram, Index top_count) {
    if (gram.rows() != gram.cols()) throw std::invalid_argument("gram matrix must be square");
    if (top_count < 1 || top_count > gram.rows()) {
        throw std::invalid_argument("requested eigenpair count out of range");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigendecomposition failed to converge");
    }
    // Eigen returns eigenvalues in increasing order.
    Vector values(top_count);
    Matrix basis(gram.rows(), top_count);
    const Index n = gram.rows();
    for (Index q = 0; q < top_count; ++q) {
        values[q] = solver.eigenvalues()[n - 1 - q];
        basis.col(q) = solver.eigenvectors().col(n - 1 - q);
    }
    return SpectralResult{std::move(values), OrthonormalBasis(std::move(basis))};
}

namespace {

Matrix gram_of(const Matrix& m) {
    Matrix gram = Matrix::Zero(m.rows(), m.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

}  // namespace

SpectralResult dominant_left_subspace(const Matrix& m, Index r) {
    if (r < 1 || r > std::min(m.rows(), m.cols())) {
        throw std::invalid_argument("subspace dimension exceeds matrix rank bound");
    }
    return gram_eigen(gram_of(m), r);
}

SpectralResult full_gram_spectrum(const Matrix& m) {
    return gram_eigen(gram_of(m), m.rows());
}

Matrix mode_gram(const DenseTensor& t, Index mode) {
    if (mode < 0 || mode >= t.order()) throw std::invalid_argument("mode out of range");
    const Index n = t.dim(mode);
    const auto [outer, inner] = detail::mode_extents(t.shape(), mode);
    Matrix gram = Matrix::Zero(n, n);
    auto lower = gram.selfadjointView<Eigen::Lower>();
    for (Index o = 0; o < outer; ++o) {
        Eigen::Map<const RowMajorMatrix> slab(t.data() + o * n * inner, n, inner);
        lower.rankUpdate(slab);
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

OrthonormalBasis orthonormalize(const Matrix& m) {
    if (m.cols() > m.rows() || m.cols() < 1) {
        throw std::invalid_argument("orthonormalize expects a tall matrix");
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
    const Vector diag = qr.matrixQR().diagonal().head(m.cols());
    const double largest = diag.cwiseAbs().maxCoeff();
    if (diag.cwiseAbs().minCoeff() < 1e-12 * largest || largest == 0.0) {
        throw std::invalid_argument("orthonormalize input is numerically rank-deficient");
    }
    for (Index j = 0; j < q.cols(); ++j) {
        if (diag[j] < 0.0) q.col(j) = -q.col(j);
    }
    return OrthonormalBasis(std::move(q));
}

std::vector<double> principal_angles(const OrthonormalBasis& x, const OrthonormalBasis& u) {
    if (x.rows() != u.rows()) throw std::invalid_argument("ambient dimensions differ");
    const Matrix cross = x.matrix().transpose() * u.matrix();
    Eigen::JacobiSVD<Matrix> svd(cross);
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(svd.singularValues().size()));
    for (Index q = 0; q < svd.singularValues().size(); ++q) {
        const double c = std::clamp(svd.singularValues()[q], 0.0, 1.0);
        angles.push_back(std::acos(c));
    }
    return angles;
}

double mean_alignment(const OrthonormalBasis& x, const OrthonormalBasis& u) {
    if (x.rows() != u.rows()) throw std::invalid_argument("ambient dimensions differ");
    if (x.cols() != u.cols()) throw std::invalid_argument("column counts differ");
    const Matrix cross = x.matrix().transpose() * u.matrix();
    return cross.squaredNorm() / static_cast<double>(x.cols());
}

}  // namespace tensorlab

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tensorlab {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense d-way array of doubles, stored flat in row-major order (last index
/// fastest). Degenerate orders d = 1, 2 are allowed everywhere.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero tensor of the given shape.
    explicit DenseTensor(std::vector<Index> shape);

    /// Wraps existing row-major data; data.size() must equal the shape product.
    DenseTensor(std::vector<Index> shape, std::vector<double> data);

    Index order() const { return static_cast<Index>(shape_.size()); }
    const std::vector<Index>& shape() const { return shape_; }
    Index dim(Index mode) const { return shape_[static_cast<std::size_t>(mode)]; }
    Index size() const { return static_cast<Index>(data_.size()); }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    double operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }
    double& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }

    template <class... Is>
    double operator()(Is... is) const {
        const std::array<Index, sizeof...(Is)> idx{static_cast<Index>(is)...};
        return data_[static_cast<std::size_t>(flat_index(idx))];
    }

    template <class... Is>
    double& operator()(Is... is) {
        const std::array<Index, sizeof...(Is)> idx{static_cast<Index>(is)...};
        return data_[static_cast<std::size_t>(flat_index(idx))];
    }

    Index flat_index(std::span<const Index> idx) const;

private:
    std::vector<Index> shape_;
    std::vector<double> data_;
};

/// Mode-`mode` unfolding: the n_mode x prod(other dims) matrix whose columns
/// are mode fibers. Columns enumerate the remaining multi-index in
/// lexicographic order with the smallest remaining mode varying slowest, so
/// that unfold(x (x) y (x) z, 0) == x * kron(y, z)^T. Modes are 0-based.
Matrix unfold(const DenseTensor& t, Index mode);

/// Inverse of unfold; fold(unfold(t, mode), mode, t.shape()) == t exactly.
DenseTensor fold(const Matrix& m, Index mode, std::span<const Index> shape);

/// Kronecker product, [a kron b](p1*i + j, p2*k + l) = a(i, k) * b(j, l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Rank-1 tensor from d vectors: entry (i_1, ..., i_d) = prod_l x^(l)_{i_l}.
DenseTensor outer(std::span<const Vector> vectors);

/// Contraction on one matrix per mode (A^(l): n_l x p_l), yielding a
/// p_1 x ... x p_d tensor with entries sum_i T_i prod_l A^(l)(i_l, j_l).
/// Implemented as d sequential single-mode products.
DenseTensor contract(const DenseTensor& t, std::span<const Matrix> mats);

/// Multilinear product [[core; U^(1), ..., U^(d)]] with U^(l): n_l x r_l.
DenseTensor tucker_to_full(const DenseTensor& core, std::span<const Matrix> factors);

double frob_inner(const DenseTensor& a, const DenseTensor& b);
double frob_norm(const DenseTensor& a);

/// CPD-rank bounds implied by a multilinear rank:
/// max_l r_l <= R <= min_l prod_{l' != l} r_{l'}.
std::pair<Index, Index> cpd_rank_bounds(std::span<const Index> ranks);

namespace detail {

/// Product of dims before `mode` (outer) and after `mode` (inner) in the
/// row-major layout; every mode-related kernel iterates (outer, n_mode, inner).
std::pair<Index, Index> mode_extents(std::span<const Index> shape, Index mode);

}  // namespace detail

}  // namespace tensorlab

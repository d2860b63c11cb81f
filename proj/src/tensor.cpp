#include "tensorlab/tensor.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace tensorlab {

namespace {

Index shape_product(std::span<const Index> shape) {
    Index p = 1;
    for (Index n : shape) p *= n;
    return p;
}

void check_shape(std::span<const Index> shape) {
    if (shape.empty()) throw std::invalid_argument("tensor order must be >= 1");
    for (Index n : shape) {
        if (n < 1) throw std::invalid_argument("tensor dimensions must be >= 1");
    }
}

void check_mode(const DenseTensor& t, Index mode) {
    if (mode < 0 || mode >= t.order()) {
        throw std::invalid_argument("mode " + std::to_string(mode) + " out of range for order " +
                                    std::to_string(t.order()));
    }
}

}  // namespace

DenseTensor::DenseTensor(std::vector<Index> shape) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(static_cast<std::size_t>(shape_product(shape_)), 0.0);
}

DenseTensor::DenseTensor(std::vector<Index> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape(shape_);
    if (static_cast<Index>(data_.size()) != shape_product(shape_)) {
        throw std::invalid_argument("data length does not match shape product");
    }
}

Index DenseTensor::flat_index(std::span<const Index> idx) const {
    if (static_cast<Index>(idx.size()) != order()) {
        throw std::invalid_argument("index arity does not match tensor order");
    }
    Index flat = 0;
    for (std::size_t l = 0; l < idx.size(); ++l) {
        if (idx[l] < 0 || idx[l] >= shape_[l]) throw std::out_of_range("tensor index out of range");
        flat = flat * shape_[l] + idx[l];
    }
    return flat;
}

namespace detail {

std::pair<Index, Index> mode_extents(std::span<const Index> shape, Index mode) {
    Index outer = 1, inner = 1;
    for (Index l = 0; l < static_cast<Index>(shape.size()); ++l) {
        if (l < mode) outer *= shape[static_cast<std::size_t>(l)];
        if (l > mode) inner *= shape[static_cast<std::size_t>(l)];
    }
    return {outer, inner};
}

namespace {

// out[..., j, ...] = sum_i M(i, j) * in[..., i, ...] along `mode`, with M given
// as an arbitrary Eigen expression of size n_mode x p.
template <class Mat>
DenseTensor mode_apply(const DenseTensor& t, const Mat& m, Index mode) {
    const Index n = t.dim(mode);
    const Index p = m.cols();
    if (m.rows() != n) throw std::invalid_argument("mode product dimension mismatch");

    std::vector<Index> out_shape = t.shape();
    out_shape[static_cast<std::size_t>(mode)] = p;
    DenseTensor out(out_shape);

    const auto [outer, inner] = mode_extents(t.shape(), mode);
    for (Index o = 0; o < outer; ++o) {
        Eigen::Map<const RowMajorMatrix> slab(t.data() + o * n * inner, n, inner);
        Eigen::Map<RowMajorMatrix> dst(out.data() + o * p * inner, p, inner);
        dst.noalias() = m.transpose() * slab;
    }
    return out;
}

}  // namespace
}  // namespace detail

Matrix unfold(const DenseTensor& t, Index mode) {
    check_mode(t, mode);
    const Index n = t.dim(mode);
    const auto [outer, inner] = detail::mode_extents(t.shape(), mode);
    Matrix m(n, outer * inner);
    for (Index o = 0; o < outer; ++o) {
        Eigen::Map<const RowMajorMatrix> slab(t.data() + o * n * inner, n, inner);
        m.middleCols(o * inner, inner) = slab;
    }
    return m;
}

DenseTensor fold(const Matrix& m, Index mode, std::span<const Index> shape) {
    check_shape(shape);
    if (mode < 0 || mode >= static_cast<Index>(shape.size())) {
        throw std::invalid_argument("fold mode out of range");
    }
    const Index n = shape[static_cast<std::size_t>(mode)];
    const auto [outer, inner] = detail::mode_extents(shape, mode);
    if (m.rows() != n || m.cols() != outer * inner) {
        throw std::invalid_argument("fold matrix dimensions do not match target shape");
    }
    DenseTensor t(std::vector<Index>(shape.begin(), shape.end()));
    for (Index o = 0; o < outer; ++o) {
        Eigen::Map<RowMajorMatrix> slab(t.data() + o * n * inner, n, inner);
        slab = m.middleCols(o * inner, inner);
    }
    return t;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DenseTensor outer(std::span<const Vector> vectors) {
    if (vectors.empty()) throw std::invalid_argument("outer product needs at least one vector");
    std::vector<Index> shape;
    shape.reserve(vectors.size());
    Index total = 1;
    for (const Vector& v : vectors) {
        if (v.size() < 1) throw std::invalid_argument("outer product vectors must be non-empty");
        shape.push_back(v.size());
        total *= v.size();
    }
    std::vector<double> data{1.0};
    data.reserve(static_cast<std::size_t>(total));
    for (const Vector& v : vectors) {
        std::vector<double> next(data.size() * static_cast<std::size_t>(v.size()));
        for (std::size_t a = 0; a < data.size(); ++a) {
            for (Index i = 0; i < v.size(); ++i) {
                next[a * static_cast<std::size_t>(v.size()) + static_cast<std::size_t>(i)] =
                    data[a] * v[i];
            }
        }
        data = std::move(next);
    }
    return DenseTensor(std::move(shape), std::move(data));
}

DenseTensor contract(const DenseTensor& t, std::span<const Matrix> mats) {
    if (static_cast<Index>(mats.size()) != t.order()) {
        throw std::invalid_argument("contract needs one matrix per mode");
    }
    DenseTensor cur = t;
    for (Index l = 0; l < t.order(); ++l) {
        cur = detail::mode_apply(cur, mats[static_cast<std::size_t>(l)], l);
    }
    return cur;
}

DenseTensor tucker_to_full(const DenseTensor& core, std::span<const Matrix> factors) {
    if (static_cast<Index>(factors.size()) != core.order()) {
        throw std::invalid_argument("tucker_to_full needs one factor per mode");
    }
    DenseTensor cur = core;
    for (Index l = 0; l < core.order(); ++l) {
        const Matrix& u = factors[static_cast<std::size_t>(l)];
        if (u.cols() != cur.dim(l)) {
            throw std::invalid_argument("factor column count does not match core dimension");
        }
        cur = detail::mode_apply(cur, u.transpose(), l);
    }
    return cur;
}

double frob_inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("frob_inner shape mismatch");
    Eigen::Map<const Vector> va(a.data(), a.size());
    Eigen::Map<const Vector> vb(b.data(), b.size());
    return va.dot(vb);
}

double frob_norm(const DenseTensor& a) {
    Eigen::Map<const Vector> va(a.data(), a.size());
    return va.norm();
}

std::pair<Index, Index> cpd_rank_bounds(std::span<const Index> ranks) {
    if (ranks.empty()) throw std::invalid_argument("cpd_rank_bounds needs at least one rank");
    Index lower = 0;
    Index upper = std::numeric_limits<Index>::max();
    for (std::size_t l = 0; l < ranks.size(); ++l) {
        if (ranks[l] < 1) throw std::invalid_argument("ranks must be >= 1");
        lower = std::max(lower, ranks[l]);
        Index others = 1;
        for (std::size_t k = 0; k < ranks.size(); ++k) {
            if (k != l) others *= ranks[k];
        }
        upper = std::min(upper, others);
    }
    return {lower, upper};
}

}  // namespace tensorlab

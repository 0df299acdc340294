#include "kronsketch/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kronsketch {

Index shape_dim(std::span<const Index> shape) {
    if (shape.empty())
        throw std::invalid_argument("shape_dim: empty shape (need P >= 1)");
    Index dim = 1;
    for (Index n : shape) {
        if (n < 1)
            throw std::invalid_argument("shape_dim: factor size must be >= 1");
        if (dim > std::numeric_limits<Index>::max() / n)
            throw std::overflow_error(
                "shape_dim: ambient dimension overflows the index type");
        dim *= n;
    }
    return dim;
}

MultiIndex multi_index_from_linear(std::span<const Index> shape, Index linear) {
    const Index dim = shape_dim(shape);
    if (linear < 0 || linear >= dim)
        throw std::out_of_range("multi_index_from_linear: linear index " +
                                std::to_string(linear) + " outside [0, " +
                                std::to_string(dim) + ")");
    MultiIndex mi;
    mi.linear = linear;
    mi.digits.resize(shape.size());
    Index rem = linear;
    for (std::size_t p = shape.size(); p-- > 0;) {
        mi.digits[p] = rem % shape[p];
        rem /= shape[p];
    }
    return mi;
}

MultiIndex multi_index_from_digits(std::span<const Index> shape,
                                   std::vector<Index> digits) {
    shape_dim(shape);
    if (digits.size() != shape.size())
        throw std::invalid_argument(
            "multi_index_from_digits: digit count does not match shape");
    Index linear = 0;
    for (std::size_t p = 0; p < shape.size(); ++p) {
        if (digits[p] < 0 || digits[p] >= shape[p])
            throw std::out_of_range("multi_index_from_digits: digit " +
                                    std::to_string(p) + " out of range");
        linear = linear * shape[p] + digits[p];
    }
    MultiIndex mi;
    mi.digits = std::move(digits);
    mi.linear = linear;
    return mi;
}

KronVector::KronVector(std::vector<Eigen::VectorXd> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty())
        throw std::invalid_argument("KronVector: need at least one factor");
    shape_.reserve(factors_.size());
    for (const auto& f : factors_) shape_.push_back(f.size());
    dim_ = shape_dim(shape_);
}

double KronVector::norm() const {
    double n = 1.0;
    for (const auto& f : factors_) n *= f.norm();
    return n;
}

KrMatrix::KrMatrix(std::vector<Eigen::MatrixXd> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty())
        throw std::invalid_argument("KrMatrix: need at least one factor");
    cols_ = factors_.front().cols();
    if (cols_ < 1)
        throw std::invalid_argument("KrMatrix: column count must be >= 1");
    shape_.reserve(factors_.size());
    for (const auto& f : factors_) {
        if (f.cols() != cols_)
            throw std::invalid_argument(
                "KrMatrix: factors must share the same column count");
        shape_.push_back(f.rows());
    }
    dim_ = shape_dim(shape_);
}

KronVector KrMatrix::column(Index r) const {
    if (r < 0 || r >= cols_)
        throw std::out_of_range("KrMatrix::column: index out of range");
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(factors_.size());
    for (const auto& f : factors_) cols.push_back(f.col(r));
    return KronVector(std::move(cols));
}

DenseTensor::DenseTensor(std::vector<Index> shape_in, Eigen::VectorXd data_in)
    : shape(std::move(shape_in)), data(std::move(data_in)) {
    if (shape_dim(shape) != data.size())
        throw std::invalid_argument(
            "DenseTensor: data length does not match shape");
}

double& DenseTensor::at(std::span<const Index> digits) {
    return data[multi_index_from_digits(shape, {digits.begin(), digits.end()})
                    .linear];
}

double DenseTensor::at(std::span<const Index> digits) const {
    return data[multi_index_from_digits(shape, {digits.begin(), digits.end()})
                    .linear];
}

namespace {

void check_cap(Index entries, Index cap, const char* what) {
    if (entries > cap)
        throw std::length_error(std::string(what) + ": " +
                                std::to_string(entries) +
                                " entries is too large to materialize (cap " +
                                std::to_string(cap) + ")");
}

}  // namespace

Eigen::VectorXd materialize(const KronVector& v, Index cap) {
    check_cap(v.dim(), cap, "materialize(KronVector)");
    Eigen::VectorXd out = Eigen::VectorXd::Ones(1);
    for (Index p = 0; p < v.order(); ++p) {
        const Eigen::VectorXd& f = v.factor(p);
        Eigen::VectorXd next(out.size() * f.size());
        for (Index i = 0; i < out.size(); ++i)
            next.segment(i * f.size(), f.size()) = out[i] * f;
        out.swap(next);
    }
    return out;
}

Eigen::MatrixXd materialize(const KrMatrix& m, Index cap) {
    check_cap(m.rows(), cap, "materialize(KrMatrix)");
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Index r = 0; r < m.cols(); ++r)
        out.col(r) = materialize(m.column(r), cap);
    return out;
}

double kron_row(const KronVector& v, const MultiIndex& i) {
    if (static_cast<Index>(i.digits.size()) != v.order())
        throw std::invalid_argument("kron_row: multi-index order mismatch");
    double prod = 1.0;
    for (Index p = 0; p < v.order(); ++p) {
        const Index d = i.digits[p];
        if (d < 0 || d >= v.shape()[p])
            throw std::out_of_range("kron_row: digit out of range");
        prod *= v.factor(p)[d];
    }
    return prod;
}

double kron_row(const KronVector& v, Index linear) {
    if (linear < 0 || linear >= v.dim())
        throw std::out_of_range("kron_row: linear index out of range");
    double prod = 1.0;
    Index rem = linear;
    for (Index p = v.order(); p-- > 0;) {
        const Index n = v.shape()[p];
        prod *= v.factor(p)[rem % n];
        rem /= n;
    }
    return prod;
}

double kron_inner(const KronVector& a, const KronVector& b) {
    if (a.shape() != b.shape())
        throw std::invalid_argument("kron_inner: shape mismatch");
    double prod = 1.0;
    for (Index p = 0; p < a.order(); ++p)
        prod *= a.factor(p).dot(b.factor(p));
    return prod;
}

double kron_dense_dot(const std::vector<Eigen::VectorXd>& factors,
                      const Eigen::VectorXd& y) {
    std::vector<Index> shape;
    shape.reserve(factors.size());
    for (const auto& f : factors) shape.push_back(f.size());
    if (shape_dim(shape) != y.size())
        throw std::invalid_argument("kron_dense_dot: length mismatch");

    // Contract the trailing (fastest-varying) mode first; each pass shrinks
    // the buffer by that mode's size.
    Eigen::VectorXd cur = y;
    for (std::size_t p = factors.size(); p-- > 0;) {
        const Eigen::VectorXd& f = factors[p];
        const Index n = f.size();
        const Index outer = cur.size() / n;
        Eigen::VectorXd next(outer);
        for (Index o = 0; o < outer; ++o)
            next[o] = cur.segment(o * n, n).dot(f);
        cur.swap(next);
    }
    return cur[0];
}

double kron_distance(const KronVector& a, const KronVector& b) {
    const double na2 = kron_inner(a, a);
    const double nb2 = kron_inner(b, b);
    const double ab = kron_inner(a, b);
    const double d2 = na2 + nb2 - 2.0 * ab;
    return d2 > 0.0 ? std::sqrt(d2) : 0.0;
}

}  // namespace kronsketch

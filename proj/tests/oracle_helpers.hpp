#pragma once

// Brute-force reference implementations used as independent oracles in the
// unit and acceptance tests. Everything here follows the textbook
// definitions directly (explicit loops, block recursions) and never calls
// the library's fast paths.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "kronsketch/core.hpp"
#include "kronsketch/leverage.hpp"
#include "kronsketch/sketch.hpp"

namespace oracle {

using kronsketch::Index;

// Kronecker product of vectors by the entrywise double loop.
inline Eigen::VectorXd kron_vectors(
    const std::vector<Eigen::VectorXd>& factors) {
    Eigen::VectorXd out = Eigen::VectorXd::Ones(1);
    for (const auto& f : factors) {
        Eigen::VectorXd next(out.size() * f.size());
        for (Index i = 0; i < out.size(); ++i)
            for (Index j = 0; j < f.size(); ++j)
                next[i * f.size() + j] = out[i] * f[j];
        out = next;
    }
    return out;
}

// Kronecker product of matrices by the block definition.
inline Eigen::MatrixXd kron_matrices(
    const std::vector<Eigen::MatrixXd>& factors) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& f : factors) {
        Eigen::MatrixXd next(out.rows() * f.rows(), out.cols() * f.cols());
        for (Index i = 0; i < out.rows(); ++i)
            for (Index j = 0; j < out.cols(); ++j)
                next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) =
                    out(i, j) * f;
        out = next;
    }
    return out;
}

// Column-wise Kronecker product of matrices sharing a column count.
inline Eigen::MatrixXd khatri_rao(
    const std::vector<Eigen::MatrixXd>& factors) {
    Index rows = 1;
    for (const auto& f : factors) rows *= f.rows();
    const Index cols = factors.front().cols();
    Eigen::MatrixXd out(rows, cols);
    for (Index r = 0; r < cols; ++r) {
        std::vector<Eigen::VectorXd> col_factors;
        for (const auto& f : factors) col_factors.push_back(f.col(r));
        out.col(r) = kron_vectors(col_factors);
    }
    return out;
}

// Normalized Hadamard matrix by the Sylvester block recursion.
inline Eigen::MatrixXd hadamard_matrix(Index n) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
    while (h.rows() < n) {
        const Index m = h.rows();
        Eigen::MatrixXd next(2 * m, 2 * m);
        next.topLeftCorner(m, m) = h;
        next.topRightCorner(m, m) = h;
        next.bottomLeftCorner(m, m) = h;
        next.bottomRightCorner(m, m) = -h;
        h = next;
    }
    return h / std::sqrt(static_cast<double>(n));
}

// Explicit J x I sampling matrix R * Omega built from a plan.
inline Eigen::MatrixXd sampling_matrix(const kronsketch::SamplePlan& plan,
                                       Index input_dim) {
    const Index j = static_cast<Index>(plan.indices.size());
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(j, input_dim);
    for (Index k = 0; k < j; ++k)
        s(k, plan.indices[k]) = plan.rescale[k];
    return s;
}

// Dense matrix of a sketch operator, rebuilt from its exposed internals by
// the operator's textbook definition (not by applying the operator).
inline Eigen::MatrixXd dense_operator(const kronsketch::SketchOperator& op) {
    using namespace kronsketch;
    const Index dim = op.input_dim();
    const Index j = op.output_dim();
    switch (op.kind()) {
        case SketchKind::Gaussian:
            return dynamic_cast<const GaussianSketch&>(op).matrix();
        case SketchKind::Kfjlt: {
            const auto& k = dynamic_cast<const KfjltSketch&>(op);
            std::vector<Eigen::MatrixXd> mixed;
            for (std::size_t p = 0; p < op.shape().size(); ++p) {
                const Index n = op.shape()[p];
                mixed.push_back(
                    hadamard_matrix(n) *
                    Eigen::MatrixXd(k.diagonal(p).signs.asDiagonal()));
            }
            return sampling_matrix(k.plan(), dim) * kron_matrices(mixed);
        }
        case SketchKind::Trp: {
            const auto& t = dynamic_cast<const TrpSketch&>(op);
            Eigen::MatrixXd m(j, dim);
            for (Index c = 0; c < j; ++c) {
                std::vector<Eigen::VectorXd> cols;
                for (std::size_t p = 0; p < op.shape().size(); ++p)
                    cols.push_back(t.block(p).col(c));
                m.row(c) = kron_vectors(cols).transpose();
            }
            return m / std::sqrt(static_cast<double>(j));
        }
        case SketchKind::TensorSketch: {
            const auto& t = dynamic_cast<const TensorSketchOperator&>(op);
            const auto& shape = op.shape();
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(j, dim);
            for (Index i = 0; i < dim; ++i) {
                Index bucket = 0;
                double sign = 1.0;
                Index rem = i;
                for (std::size_t p = shape.size(); p-- > 0;) {
                    const Index digit = rem % shape[p];
                    rem /= shape[p];
                    bucket += t.hash_pair(p).bucket[digit];
                    sign *= t.hash_pair(p).sign[digit];
                }
                m(bucket % j, i) = sign;
            }
            return m;
        }
        case SketchKind::Sampling: {
            const auto& s = dynamic_cast<const SamplingSketch&>(op);
            return sampling_matrix(s.plan(), dim);
        }
    }
    throw std::logic_error("dense_operator: unknown kind");
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Index rows,
                                     Index cols) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
    return m;
}

inline double rel_err(double value, double reference) {
    const double denom = std::max(std::abs(reference), 1e-300);
    return std::abs(value - reference) / denom;
}

inline double rel_err(const Eigen::VectorXd& value,
                      const Eigen::VectorXd& reference) {
    const double denom = std::max(reference.norm(), 1e-300);
    return (value - reference).norm() / denom;
}

inline double rel_err(const Eigen::MatrixXd& value,
                      const Eigen::MatrixXd& reference) {
    const double denom = std::max(reference.norm(), 1e-300);
    return (value - reference).norm() / denom;
}

}  // namespace oracle

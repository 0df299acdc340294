#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace kronsketch {

using Index = std::int64_t;

// Default cap on dense materialization, in entries. Everything above this
// size must stay in factorized form.
inline constexpr Index kMaterializeCap = Index(1) << 24;

// Checked product of factor sizes. Throws std::overflow_error if the
// implied ambient dimension does not fit in Index.
Index shape_dim(std::span<const Index> shape);

// Row address into a Kronecker product: P digits, one per factor, plus the
// equivalent linear index. Ordering is row-major, i.e. the leftmost factor
// varies slowest. Digits and linear index are 0-based.
struct MultiIndex {
    std::vector<Index> digits;
    Index linear = 0;
};

MultiIndex multi_index_from_linear(std::span<const Index> shape, Index linear);
MultiIndex multi_index_from_digits(std::span<const Index> shape,
                                   std::vector<Index> digits);

// A vector in R^{I_1 * ... * I_P} stored as P factor vectors and never
// materialized by default. Immutable after construction; safe to share
// across threads.
class KronVector {
  public:
    explicit KronVector(std::vector<Eigen::VectorXd> factors);

    Index order() const { return static_cast<Index>(factors_.size()); }
    const Eigen::VectorXd& factor(Index p) const { return factors_[p]; }
    const std::vector<Eigen::VectorXd>& factors() const { return factors_; }
    const std::vector<Index>& shape() const { return shape_; }
    Index dim() const { return dim_; }

    // Product of factor norms; equals the norm of the materialized vector.
    double norm() const;

  private:
    std::vector<Eigen::VectorXd> factors_;
    std::vector<Index> shape_;
    Index dim_;
};

// A Khatri-Rao structured matrix: column r of the materialized matrix is
// the Kronecker product of column r of each factor. All factors share the
// column count R. Immutable.
class KrMatrix {
  public:
    explicit KrMatrix(std::vector<Eigen::MatrixXd> factors);

    Index order() const { return static_cast<Index>(factors_.size()); }
    const Eigen::MatrixXd& factor(Index p) const { return factors_[p]; }
    const std::vector<Eigen::MatrixXd>& factors() const { return factors_; }
    const std::vector<Index>& shape() const { return shape_; }
    Index rows() const { return dim_; }
    Index cols() const { return cols_; }

    KronVector column(Index r) const;

  private:
    std::vector<Eigen::MatrixXd> factors_;
    std::vector<Index> shape_;
    Index dim_;
    Index cols_;
};

// Dense P-way array with the same row-major linearization as MultiIndex.
// Used for desk-scale tensors (ALS input, image stacks).
struct DenseTensor {
    std::vector<Index> shape;
    Eigen::VectorXd data;

    DenseTensor() = default;
    DenseTensor(std::vector<Index> shape_in, Eigen::VectorXd data_in);

    Index dim() const { return data.size(); }
    double& at(std::span<const Index> digits);
    double at(std::span<const Index> digits) const;
};

// Dense materialization oracles. Guarded by `cap` entries; oversized
// requests throw std::length_error ("too large to materialize").
Eigen::VectorXd materialize(const KronVector& v, Index cap = kMaterializeCap);
Eigen::MatrixXd materialize(const KrMatrix& m, Index cap = kMaterializeCap);

// Single entry of the materialized vector in O(P).
double kron_row(const KronVector& v, const MultiIndex& i);
double kron_row(const KronVector& v, Index linear);

// Inner product of two Kronecker vectors of the same shape, computed as the
// product of factor inner products.
double kron_inner(const KronVector& a, const KronVector& b);

// <factor_1 x ... x factor_P, y> for a dense y of matching length, computed
// by successive mode contractions in O(dim) without forming the Kronecker
// product.
double kron_dense_dot(const std::vector<Eigen::VectorXd>& factors,
                      const Eigen::VectorXd& y);

// ||a - b|| for Kronecker vectors, via factor Grams; tiny negative
// round-off under the root is clamped to zero.
double kron_distance(const KronVector& a, const KronVector& b);

}  // namespace kronsketch

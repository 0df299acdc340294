#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kronsketch/core.hpp"
#include "kronsketch/hadamard.hpp"
#include "kronsketch/leverage.hpp"

namespace kronsketch {

enum class SketchKind { Gaussian, Kfjlt, Trp, TensorSketch, Sampling };

std::string to_string(SketchKind kind);
SketchKind sketch_kind_from_string(const std::string& name);

struct SketchOptions {
    // Row-sampling mode for the kfjlt kind. Without replacement matches the
    // benchmark protocol; with replacement matches the sampling theory.
    bool with_replacement = false;

    // The Khatri-Rao matrix whose estimated row leverage scores drive the
    // sampling kind. Required for that kind, ignored otherwise.
    const KrMatrix* sampling_target = nullptr;

    // Guard for the dense baseline (gaussian stores a J x dim matrix).
    Index materialize_cap = kMaterializeCap;
};

// A seeded, immutable linear map from the Kronecker-structured input space
// to R^J. Construction consumes the seed; all applies are pure and safe to
// call concurrently on a shared instance. Only the gaussian baseline ever
// materializes its input.
class SketchOperator {
  public:
    virtual ~SketchOperator() = default;

    SketchKind kind() const { return kind_; }
    const std::vector<Index>& shape() const { return shape_; }
    Index input_dim() const { return input_dim_; }
    Index output_dim() const { return output_dim_; }
    std::uint64_t seed() const { return seed_; }

    // Fast factorized path for a Kronecker vector.
    Eigen::VectorXd apply(const KronVector& v) const;

    // Column-wise application to a Khatri-Rao matrix; all columns see the
    // same operator randomness.
    Eigen::MatrixXd apply(const KrMatrix& m) const;

    // Application to an arbitrary dense vector of the ambient dimension.
    // Desk-scale diagnostic path (the input itself is already dense).
    Eigen::VectorXd apply_dense(const Eigen::VectorXd& y) const;

  protected:
    SketchOperator(SketchKind kind, std::vector<Index> shape, Index j,
                   std::uint64_t seed);

    virtual Eigen::VectorXd apply_kron_impl(const KronVector& v) const = 0;
    virtual Eigen::VectorXd apply_dense_impl(const Eigen::VectorXd& y) const = 0;

  private:
    SketchKind kind_;
    std::vector<Index> shape_;
    Index input_dim_;
    Index output_dim_;
    std::uint64_t seed_;
};

std::unique_ptr<SketchOperator> make_sketch(SketchKind kind,
                                            std::vector<Index> shape, Index j,
                                            std::uint64_t seed,
                                            const SketchOptions& options = {});

// Dense J x dim baseline with i.i.d. standard normal entries scaled by
// 1/sqrt(J).
class GaussianSketch final : public SketchOperator {
  public:
    GaussianSketch(std::vector<Index> shape, Index j, std::uint64_t seed,
                   Index cap = kMaterializeCap);

    const Eigen::MatrixXd& matrix() const { return matrix_; }

  private:
    Eigen::VectorXd apply_kron_impl(const KronVector& v) const override;
    Eigen::VectorXd apply_dense_impl(const Eigen::VectorXd& y) const override;

    Eigen::MatrixXd matrix_;
    Index cap_;
};

// Per-factor randomized Hadamard mixing followed by uniform row sampling of
// the implicit Kronecker product. Factor sizes must be powers of two.
class KfjltSketch final : public SketchOperator {
  public:
    KfjltSketch(std::vector<Index> shape, Index j, std::uint64_t seed,
                bool with_replacement);

    const RademacherDiagonal& diagonal(Index p) const { return diags_[p]; }
    const SamplePlan& plan() const { return plan_; }
    bool with_replacement() const { return plan_.with_replacement; }

  private:
    Eigen::VectorXd apply_kron_impl(const KronVector& v) const override;
    Eigen::VectorXd apply_dense_impl(const Eigen::VectorXd& y) const override;

    std::vector<RademacherDiagonal> diags_;
    SamplePlan plan_;
    // Sampled row indices pre-decomposed into factor digits (J x P).
    std::vector<std::vector<Index>> sample_digits_;
};

// Sketch whose transpose is a Khatri-Rao product of P independent I_p x J
// standard normal blocks; output scaled by 1/sqrt(J) so the squared norm is
// unbiased (entries of the implicit rows are products of P unit normals).
class TrpSketch final : public SketchOperator {
  public:
    TrpSketch(std::vector<Index> shape, Index j, std::uint64_t seed);

    const Eigen::MatrixXd& block(Index p) const { return blocks_[p]; }

  private:
    Eigen::VectorXd apply_kron_impl(const KronVector& v) const override;
    Eigen::VectorXd apply_dense_impl(const Eigen::VectorXd& y) const override;

    std::vector<Eigen::MatrixXd> blocks_;
};

// Bucket hash (pairwise independent) and sign hash (4-wise independent) for
// one factor, tabulated over [0, I_p). Both come from random polynomials
// over the Mersenne prime 2^31 - 1, degree 1 and 3 respectively.
struct HashPair {
    std::vector<Index> bucket;
    Eigen::VectorXd sign;
};

// Count-sketch of each factor into length J, combined across factors by
// circular convolution (FFT). Self-normalizing: no global rescale.
class TensorSketchOperator final : public SketchOperator {
  public:
    TensorSketchOperator(std::vector<Index> shape, Index j,
                         std::uint64_t seed);

    const HashPair& hash_pair(Index p) const { return hashes_[p]; }

    // Combined bucket of a full row index: sum of factor buckets mod J.
    Index combined_bucket(Index linear) const;
    double combined_sign(Index linear) const;

  private:
    Eigen::VectorXd apply_kron_impl(const KronVector& v) const override;
    Eigen::VectorXd apply_dense_impl(const Eigen::VectorXd& y) const override;

    std::vector<HashPair> hashes_;
};

// Estimated-leverage-score row sampling: the sampling distribution is the
// normalized product of per-factor leverage scores of the target matrix,
// drawn with replacement and rescaled by 1/sqrt(J q_i).
class SamplingSketch final : public SketchOperator {
  public:
    SamplingSketch(std::vector<Index> shape, Index j, std::uint64_t seed,
                   const KrMatrix& target);

    const SamplePlan& plan() const { return plan_; }
    const SamplingDistribution& distribution() const { return plan_.q; }
    bool rank_deficient() const { return rank_deficient_; }

  private:
    Eigen::VectorXd apply_kron_impl(const KronVector& v) const override;
    Eigen::VectorXd apply_dense_impl(const Eigen::VectorXd& y) const override;

    SamplePlan plan_;
    bool rank_deficient_ = false;
};

// Row-sampling distribution over the Kronecker row space of m, proportional
// to the product of per-factor leverage scores. Stored in factorized form
// (per-factor marginals), so the ambient dimension may exceed any
// materialization cap. A rank-deficient factor gets its marginal
// renormalized; the flag reports that this happened.
SamplingDistribution sampling_distribution(const KrMatrix& m,
                                           bool* rank_deficient = nullptr);

}  // namespace kronsketch

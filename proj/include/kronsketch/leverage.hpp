#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "kronsketch/core.hpp"

namespace kronsketch {

// Per-row leverage scores of a matrix, its numerical rank, and the
// coherence (max score). Scores sum to the rank; rank/I <= coherence <= 1
// except for the all-zero matrix, where everything is 0.
struct LeverageProfile {
    Eigen::VectorXd scores;
    Index rank = 0;
    double coherence = 0.0;
};

// Scores are squared row norms of an orthonormal basis for range(A),
// obtained from a rank-revealing factorization (SVD). Singular values below
// max(I,R) * sigma_max * 1e-12 count as zero.
LeverageProfile leverage_scores(const Eigen::MatrixXd& a);

// Product of factor coherences; an upper bound on the coherence of the
// materialized Khatri-Rao matrix.
double kr_leverage_upper(const KrMatrix& m);

// Row-sampling distribution over [0, size). Three representations:
//  - uniform: symbolic, so the index space may exceed materialization caps;
//  - dense:   explicit nonnegative weights (normalized on construction);
//  - factorized: product of per-factor marginals over a Kronecker index
//    space, sampled digit by digit.
class SamplingDistribution {
  public:
    enum class Kind { Uniform, Dense, Factorized };

    // Empty distribution; only useful as a placeholder before assignment.
    SamplingDistribution() = default;

    static SamplingDistribution uniform(Index size);
    static SamplingDistribution dense(Eigen::VectorXd weights);
    static SamplingDistribution factorized(
        std::vector<Eigen::VectorXd> marginals);

    Kind kind() const { return kind_; }
    Index size() const { return size_; }
    double prob(Index i) const;
    Index draw(std::mt19937_64& rng) const;

    const std::vector<Index>& shape() const { return shape_; }
    const std::vector<Eigen::VectorXd>& marginals() const {
        return marginals_;
    }

  private:
    Kind kind_ = Kind::Uniform;
    Index size_ = 0;
    Eigen::VectorXd weights_;    // dense
    Eigen::VectorXd cumulative_; // dense
    std::vector<Eigen::VectorXd> marginals_;   // factorized
    std::vector<Eigen::VectorXd> marg_cumul_;  // factorized
    std::vector<Index> shape_;                 // factorized
};

// J sampled row indices with their rescale coefficients 1/sqrt(J q_i),
// computed from the distribution the plan was drawn from. Without
// replacement the indices are distinct and the rescale keeps the
// with-replacement formula (benchmark-parity mode, not unbiased).
struct SamplePlan {
    std::vector<Index> indices;
    Eigen::VectorXd rescale;
    SamplingDistribution q;
    bool with_replacement = true;
    std::uint64_t seed = 0;
};

SamplePlan draw_sample_plan(const SamplingDistribution& q, Index j,
                            bool with_replacement, std::uint64_t seed);

// Row j of the output is rescale_j times row indices[j] of the operand.
// The operand may be an explicit matrix or a lazy row evaluator, so sources
// larger than the materialization cap never need to be formed.
Eigen::MatrixXd apply_sample_plan(const SamplePlan& plan,
                                  const Eigen::MatrixXd& a);
Eigen::VectorXd apply_sample_plan(const SamplePlan& plan,
                                  const Eigen::VectorXd& a);
Eigen::VectorXd apply_sample_plan(const SamplePlan& plan, Index rows,
                                  const std::function<double(Index)>& row);

}  // namespace kronsketch

#include "kronsketch/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "kronsketch/rng.hpp"

namespace kronsketch {

LeverageProfile leverage_scores(const Eigen::MatrixXd& a) {
    const Index rows = a.rows();
    const Index cols = a.cols();
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("leverage_scores: empty matrix");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
    const double smax = svd.singularValues().size() > 0
                            ? svd.singularValues()(0)
                            : 0.0;
    const double tol =
        static_cast<double>(std::max(rows, cols)) * smax * 1e-12;

    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;

    LeverageProfile profile;
    profile.rank = rank;
    profile.scores = Eigen::VectorXd::Zero(rows);
    if (rank == 0) return profile;  // all-zero matrix: scores 0, coherence 0

    const auto basis = svd.matrixU().leftCols(rank);
    for (Index i = 0; i < rows; ++i)
        profile.scores[i] =
            std::clamp(basis.row(i).squaredNorm(), 0.0, 1.0);
    profile.coherence = profile.scores.maxCoeff();
    return profile;
}

double kr_leverage_upper(const KrMatrix& m) {
    double prod = 1.0;
    for (Index p = 0; p < m.order(); ++p)
        prod *= leverage_scores(m.factor(p)).coherence;
    return prod;
}

SamplingDistribution SamplingDistribution::uniform(Index size) {
    if (size < 1)
        throw std::invalid_argument("SamplingDistribution: size must be >= 1");
    SamplingDistribution d;
    d.kind_ = Kind::Uniform;
    d.size_ = size;
    return d;
}

SamplingDistribution SamplingDistribution::dense(Eigen::VectorXd weights) {
    if (weights.size() < 1)
        throw std::invalid_argument("SamplingDistribution: empty weights");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument(
            "SamplingDistribution: negative probability mass");
    const double total = weights.sum();
    if (!(total > 0.0))
        throw std::invalid_argument(
            "SamplingDistribution: weights sum to zero");
    SamplingDistribution d;
    d.kind_ = Kind::Dense;
    d.size_ = weights.size();
    d.weights_ = weights / total;
    d.cumulative_.resize(d.size_);
    double acc = 0.0;
    for (Index i = 0; i < d.size_; ++i) {
        acc += d.weights_[i];
        d.cumulative_[i] = acc;
    }
    d.cumulative_[d.size_ - 1] = 1.0;
    return d;
}

SamplingDistribution SamplingDistribution::factorized(
    std::vector<Eigen::VectorXd> marginals) {
    if (marginals.empty())
        throw std::invalid_argument("SamplingDistribution: no marginals");
    SamplingDistribution d;
    d.kind_ = Kind::Factorized;
    for (auto& m : marginals) {
        if (m.size() < 1)
            throw std::invalid_argument("SamplingDistribution: empty marginal");
        if ((m.array() < 0.0).any())
            throw std::invalid_argument(
                "SamplingDistribution: negative probability mass");
        const double total = m.sum();
        if (!(total > 0.0))
            throw std::invalid_argument(
                "SamplingDistribution: marginal sums to zero");
        m /= total;
        d.shape_.push_back(m.size());
        Eigen::VectorXd cum(m.size());
        double acc = 0.0;
        for (Index i = 0; i < m.size(); ++i) {
            acc += m[i];
            cum[i] = acc;
        }
        cum[m.size() - 1] = 1.0;
        d.marg_cumul_.push_back(std::move(cum));
    }
    d.marginals_ = std::move(marginals);
    d.size_ = shape_dim(d.shape_);
    return d;
}

double SamplingDistribution::prob(Index i) const {
    if (i < 0 || i >= size_)
        throw std::out_of_range("SamplingDistribution::prob: out of range");
    switch (kind_) {
        case Kind::Uniform:
            return 1.0 / static_cast<double>(size_);
        case Kind::Dense:
            return weights_[i];
        case Kind::Factorized: {
            double p = 1.0;
            Index rem = i;
            for (std::size_t q = shape_.size(); q-- > 0;) {
                p *= marginals_[q][rem % shape_[q]];
                rem /= shape_[q];
            }
            return p;
        }
    }
    return 0.0;
}

namespace {

Index draw_from_cumulative(const Eigen::VectorXd& cum, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    const double* begin = cum.data();
    const double* end = begin + cum.size();
    const double* it = std::lower_bound(begin, end, u);
    if (it == end) --it;
    return static_cast<Index>(it - begin);
}

}  // namespace

Index SamplingDistribution::draw(std::mt19937_64& rng) const {
    switch (kind_) {
        case Kind::Uniform: {
            std::uniform_int_distribution<Index> d(0, size_ - 1);
            return d(rng);
        }
        case Kind::Dense:
            return draw_from_cumulative(cumulative_, rng);
        case Kind::Factorized: {
            Index linear = 0;
            for (std::size_t p = 0; p < shape_.size(); ++p)
                linear = linear * shape_[p] +
                         draw_from_cumulative(marg_cumul_[p], rng);
            return linear;
        }
    }
    return 0;
}

namespace {

// Distinct uniform indices. Partial Fisher-Yates when the index space is
// small enough for an explicit array, rejection sampling otherwise (the
// large-space regime always has J far below the space size in practice).
std::vector<Index> sample_uniform_without_replacement(Index size, Index j,
                                                      std::mt19937_64& rng) {
    std::vector<Index> out;
    out.reserve(j);
    if (size <= (Index(1) << 24)) {
        std::vector<Index> pool(size);
        std::iota(pool.begin(), pool.end(), Index(0));
        for (Index k = 0; k < j; ++k) {
            std::uniform_int_distribution<Index> d(k, size - 1);
            std::swap(pool[k], pool[d(rng)]);
            out.push_back(pool[k]);
        }
    } else {
        std::unordered_set<Index> seen;
        std::uniform_int_distribution<Index> d(0, size - 1);
        while (static_cast<Index>(out.size()) < j) {
            const Index i = d(rng);
            if (seen.insert(i).second) out.push_back(i);
        }
    }
    return out;
}

// Sequential draws from a dense distribution renormalized over the
// remaining support after each draw.
std::vector<Index> sample_dense_without_replacement(
    const SamplingDistribution& q, Index j, std::mt19937_64& rng) {
    Eigen::VectorXd remaining(q.size());
    for (Index i = 0; i < q.size(); ++i) remaining[i] = q.prob(i);
    double total = remaining.sum();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Index> out;
    out.reserve(j);
    for (Index k = 0; k < j; ++k) {
        if (!(total > 0.0))
            throw std::runtime_error(
                "draw_sample_plan: support exhausted before J draws");
        const double target = unit(rng) * total;
        double acc = 0.0;
        Index pick = -1;
        for (Index i = 0; i < remaining.size(); ++i) {
            if (remaining[i] <= 0.0) continue;
            acc += remaining[i];
            if (acc >= target) {
                pick = i;
                break;
            }
        }
        if (pick < 0) {  // round-off fell past the end; take last live index
            for (Index i = remaining.size(); i-- > 0;)
                if (remaining[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        out.push_back(pick);
        total -= remaining[pick];
        remaining[pick] = 0.0;
    }
    return out;
}

}  // namespace

SamplePlan draw_sample_plan(const SamplingDistribution& q, Index j,
                            bool with_replacement, std::uint64_t seed) {
    if (j < 1)
        throw std::invalid_argument("draw_sample_plan: J must be >= 1");
    if (!with_replacement && j > q.size())
        throw std::invalid_argument(
            "draw_sample_plan: J exceeds the index space for "
            "without-replacement sampling");

    auto rng = make_rng(seed);
    SamplePlan plan;
    plan.q = q;
    plan.with_replacement = with_replacement;
    plan.seed = seed;

    if (with_replacement) {
        plan.indices.reserve(j);
        for (Index k = 0; k < j; ++k) plan.indices.push_back(q.draw(rng));
    } else if (q.kind() == SamplingDistribution::Kind::Uniform) {
        plan.indices = sample_uniform_without_replacement(q.size(), j, rng);
    } else if (q.kind() == SamplingDistribution::Kind::Dense) {
        plan.indices = sample_dense_without_replacement(q, j, rng);
    } else {
        throw std::invalid_argument(
            "draw_sample_plan: without-replacement sampling needs a uniform "
            "or dense distribution");
    }

    plan.rescale.resize(j);
    const double jd = static_cast<double>(j);
    for (Index k = 0; k < j; ++k)
        plan.rescale[k] = 1.0 / std::sqrt(jd * q.prob(plan.indices[k]));
    return plan;
}

Eigen::MatrixXd apply_sample_plan(const SamplePlan& plan,
                                  const Eigen::MatrixXd& a) {
    const Index j = static_cast<Index>(plan.indices.size());
    Eigen::MatrixXd out(j, a.cols());
    for (Index k = 0; k < j; ++k) {
        const Index i = plan.indices[k];
        if (i < 0 || i >= a.rows())
            throw std::out_of_range("apply_sample_plan: row index out of range");
        out.row(k) = plan.rescale[k] * a.row(i);
    }
    return out;
}

Eigen::VectorXd apply_sample_plan(const SamplePlan& plan,
                                  const Eigen::VectorXd& a) {
    return apply_sample_plan(
        plan, a.size(), [&a](Index i) { return a[i]; });
}

Eigen::VectorXd apply_sample_plan(const SamplePlan& plan, Index rows,
                                  const std::function<double(Index)>& row) {
    const Index j = static_cast<Index>(plan.indices.size());
    Eigen::VectorXd out(j);
    for (Index k = 0; k < j; ++k) {
        const Index i = plan.indices[k];
        if (i < 0 || i >= rows)
            throw std::out_of_range("apply_sample_plan: row index out of range");
        out[k] = plan.rescale[k] * row(i);
    }
    return out;
}

}  // namespace kronsketch

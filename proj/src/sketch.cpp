#include "kronsketch/sketch.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kronsketch/rng.hpp"

namespace kronsketch {

std::string to_string(SketchKind kind) {
    switch (kind) {
        case SketchKind::Gaussian: return "gaussian";
        case SketchKind::Kfjlt: return "kfjlt";
        case SketchKind::Trp: return "trp";
        case SketchKind::TensorSketch: return "tensorsketch";
        case SketchKind::Sampling: return "sampling";
    }
    return "?";
}

SketchKind sketch_kind_from_string(const std::string& name) {
    if (name == "gaussian") return SketchKind::Gaussian;
    if (name == "kfjlt") return SketchKind::Kfjlt;
    if (name == "trp") return SketchKind::Trp;
    if (name == "tensorsketch") return SketchKind::TensorSketch;
    if (name == "sampling") return SketchKind::Sampling;
    throw std::invalid_argument("unknown sketch kind: " + name);
}

SketchOperator::SketchOperator(SketchKind kind, std::vector<Index> shape,
                               Index j, std::uint64_t seed)
    : kind_(kind), shape_(std::move(shape)), output_dim_(j), seed_(seed) {
    input_dim_ = shape_dim(shape_);
    if (j < 1)
        throw std::invalid_argument("SketchOperator: J must be >= 1");
}

Eigen::VectorXd SketchOperator::apply(const KronVector& v) const {
    if (v.shape() != shape_)
        throw std::invalid_argument("SketchOperator: input shape mismatch");
    return apply_kron_impl(v);
}

Eigen::MatrixXd SketchOperator::apply(const KrMatrix& m) const {
    if (m.shape() != shape_)
        throw std::invalid_argument("SketchOperator: input shape mismatch");
    Eigen::MatrixXd out(output_dim_, m.cols());
    for (Index r = 0; r < m.cols(); ++r)
        out.col(r) = apply_kron_impl(m.column(r));
    return out;
}

Eigen::VectorXd SketchOperator::apply_dense(const Eigen::VectorXd& y) const {
    if (y.size() != input_dim_)
        throw std::invalid_argument("SketchOperator: input length mismatch");
    return apply_dense_impl(y);
}

// ---------------------------------------------------------------------------
// gaussian

GaussianSketch::GaussianSketch(std::vector<Index> shape, Index j,
                               std::uint64_t seed, Index cap)
    : SketchOperator(SketchKind::Gaussian, std::move(shape), j, seed),
      cap_(cap) {
    if (input_dim() > cap_)
        throw std::length_error(
            "GaussianSketch: ambient dimension exceeds the materialization "
            "cap; use a structured kind");
    auto rng = make_rng(derive_seed(seed, "gaussian.entries"));
    std::normal_distribution<double> normal;
    matrix_.resize(j, input_dim());
    const double scale = 1.0 / std::sqrt(static_cast<double>(j));
    for (Index c = 0; c < matrix_.cols(); ++c)
        for (Index r = 0; r < matrix_.rows(); ++r)
            matrix_(r, c) = scale * normal(rng);
}

Eigen::VectorXd GaussianSketch::apply_kron_impl(const KronVector& v) const {
    return matrix_ * materialize(v, cap_);
}

Eigen::VectorXd GaussianSketch::apply_dense_impl(
    const Eigen::VectorXd& y) const {
    return matrix_ * y;
}

// ---------------------------------------------------------------------------
// kfjlt

KfjltSketch::KfjltSketch(std::vector<Index> shape, Index j,
                         std::uint64_t seed, bool with_replacement)
    : SketchOperator(SketchKind::Kfjlt, std::move(shape), j, seed) {
    for (Index n : this->shape())
        if (!is_pow2(n))
            throw std::invalid_argument(
                "KfjltSketch: every factor size must be a power of two "
                "(zero-pad the factors first)");
    if (!with_replacement && j > input_dim())
        throw std::invalid_argument(
            "KfjltSketch: J exceeds the ambient dimension for "
            "without-replacement sampling");

    diags_.reserve(this->shape().size());
    for (std::size_t p = 0; p < this->shape().size(); ++p)
        diags_.push_back(make_rademacher(
            this->shape()[p], derive_seed(seed, "kfjlt.diag", p)));

    plan_ = draw_sample_plan(SamplingDistribution::uniform(input_dim()), j,
                             with_replacement,
                             derive_seed(seed, "kfjlt.plan"));

    sample_digits_.reserve(plan_.indices.size());
    for (Index lin : plan_.indices)
        sample_digits_.push_back(
            multi_index_from_linear(this->shape(), lin).digits);
}

Eigen::VectorXd KfjltSketch::apply_kron_impl(const KronVector& v) const {
    const Index p = v.order();
    std::vector<Eigen::VectorXd> mixed(p);
    for (Index q = 0; q < p; ++q) {
        mixed[q] = diags_[q].signs.cwiseProduct(v.factor(q));
        fwht_inplace(std::span<double>(mixed[q].data(), mixed[q].size()));
    }
    const Index j = output_dim();
    Eigen::VectorXd out(j);
    for (Index k = 0; k < j; ++k) {
        double prod = plan_.rescale[k];
        for (Index q = 0; q < p; ++q) prod *= mixed[q][sample_digits_[k][q]];
        out[k] = prod;
    }
    return out;
}

Eigen::VectorXd KfjltSketch::apply_dense_impl(const Eigen::VectorXd& y) const {
    // Mode-wise sign flip + transform of the implicit tensor, then row
    // sampling. Equivalent to the Kronecker product of the per-factor maps.
    Eigen::VectorXd work = y;
    const auto& dims = shape();
    Index inner = input_dim();
    for (std::size_t p = 0; p < dims.size(); ++p) {
        const Index n = dims[p];
        inner /= n;
        const Index outer = input_dim() / (n * inner);
        Eigen::VectorXd fiber(n);
        for (Index o = 0; o < outer; ++o) {
            const Index base = o * n * inner;
            for (Index t = 0; t < inner; ++t) {
                for (Index i = 0; i < n; ++i)
                    fiber[i] = diags_[p].signs[i] * work[base + i * inner + t];
                fwht_inplace(std::span<double>(fiber.data(), n));
                for (Index i = 0; i < n; ++i)
                    work[base + i * inner + t] = fiber[i];
            }
        }
    }
    return apply_sample_plan(plan_, work);
}

// ---------------------------------------------------------------------------
// trp

TrpSketch::TrpSketch(std::vector<Index> shape, Index j, std::uint64_t seed)
    : SketchOperator(SketchKind::Trp, std::move(shape), j, seed) {
    blocks_.reserve(this->shape().size());
    for (std::size_t p = 0; p < this->shape().size(); ++p) {
        auto rng = make_rng(derive_seed(seed, "trp.block", p));
        std::normal_distribution<double> normal;
        Eigen::MatrixXd block(this->shape()[p], j);
        for (Index c = 0; c < block.cols(); ++c)
            for (Index r = 0; r < block.rows(); ++r)
                block(r, c) = normal(rng);
        blocks_.push_back(std::move(block));
    }
}

Eigen::VectorXd TrpSketch::apply_kron_impl(const KronVector& v) const {
    Eigen::VectorXd out =
        Eigen::VectorXd::Constant(output_dim(),
                                  1.0 / std::sqrt(static_cast<double>(
                                            output_dim())));
    for (Index p = 0; p < v.order(); ++p)
        out = out.cwiseProduct(blocks_[p].transpose() * v.factor(p));
    return out;
}

Eigen::VectorXd TrpSketch::apply_dense_impl(const Eigen::VectorXd& y) const {
    const Index j = output_dim();
    Eigen::VectorXd out(j);
    std::vector<Eigen::VectorXd> cols(blocks_.size());
    for (Index k = 0; k < j; ++k) {
        for (std::size_t p = 0; p < blocks_.size(); ++p)
            cols[p] = blocks_[p].col(k);
        out[k] = kron_dense_dot(cols, y);
    }
    return out / std::sqrt(static_cast<double>(j));
}

// ---------------------------------------------------------------------------
// tensorsketch

namespace {

constexpr std::uint64_t kMersenne31 = (std::uint64_t(1) << 31) - 1;

std::uint64_t poly_mod_m31(const std::vector<std::uint64_t>& coeffs,
                           std::uint64_t x) {
    // Horner over the Mersenne prime; every intermediate fits in 64 bits as
    // long as x < 2^32.
    std::uint64_t acc = 0;
    for (std::uint64_t c : coeffs) acc = (acc * x + c) % kMersenne31;
    return acc;
}

HashPair make_hash_pair(Index domain, Index buckets, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::uniform_int_distribution<std::uint64_t> coeff(0, kMersenne31 - 1);
    std::vector<std::uint64_t> bucket_poly{coeff(rng), coeff(rng)};
    std::vector<std::uint64_t> sign_poly{coeff(rng), coeff(rng), coeff(rng),
                                         coeff(rng)};
    HashPair h;
    h.bucket.resize(domain);
    h.sign.resize(domain);
    for (Index i = 0; i < domain; ++i) {
        h.bucket[i] = static_cast<Index>(
            poly_mod_m31(bucket_poly, static_cast<std::uint64_t>(i)) %
            static_cast<std::uint64_t>(buckets));
        h.sign[i] =
            (poly_mod_m31(sign_poly, static_cast<std::uint64_t>(i)) & 1u)
                ? 1.0
                : -1.0;
    }
    return h;
}

using ComplexVec = std::vector<std::complex<double>>;

}  // namespace

TensorSketchOperator::TensorSketchOperator(std::vector<Index> shape, Index j,
                                           std::uint64_t seed)
    : SketchOperator(SketchKind::TensorSketch, std::move(shape), j, seed) {
    hashes_.reserve(this->shape().size());
    for (std::size_t p = 0; p < this->shape().size(); ++p)
        hashes_.push_back(make_hash_pair(this->shape()[p], j,
                                         derive_seed(seed, "ts.hash", p)));
}

Index TensorSketchOperator::combined_bucket(Index linear) const {
    const auto digits = multi_index_from_linear(shape(), linear).digits;
    Index b = 0;
    for (std::size_t p = 0; p < digits.size(); ++p)
        b += hashes_[p].bucket[digits[p]];
    return b % output_dim();
}

double TensorSketchOperator::combined_sign(Index linear) const {
    const auto digits = multi_index_from_linear(shape(), linear).digits;
    double s = 1.0;
    for (std::size_t p = 0; p < digits.size(); ++p)
        s *= hashes_[p].sign[digits[p]];
    return s;
}

Eigen::VectorXd TensorSketchOperator::apply_kron_impl(
    const KronVector& v) const {
    const Index j = output_dim();
    const Index p = v.order();

    auto count_sketch = [&](Index q) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(j);
        const Eigen::VectorXd& x = v.factor(q);
        for (Index i = 0; i < x.size(); ++i)
            c[hashes_[q].bucket[i]] += hashes_[q].sign[i] * x[i];
        return c;
    };

    if (p == 1) return count_sketch(0);

    Eigen::FFT<double> fft;
    ComplexVec acc(j), spec(j);
    std::vector<double> buf(j);
    for (Index q = 0; q < p; ++q) {
        Eigen::VectorXd c = count_sketch(q);
        std::copy(c.data(), c.data() + j, buf.begin());
        fft.fwd(spec, buf);
        if (q == 0) {
            acc = spec;
        } else {
            for (Index k = 0; k < j; ++k) acc[k] *= spec[k];
        }
    }
    std::vector<double> conv(j);
    fft.inv(conv, acc);
    return Eigen::Map<Eigen::VectorXd>(conv.data(), j);
}

Eigen::VectorXd TensorSketchOperator::apply_dense_impl(
    const Eigen::VectorXd& y) const {
    // Combined count-sketch with bucket sum mod J and sign product; equal to
    // the factorized convolution path as a linear operator.
    const Index j = output_dim();
    const auto& dims = shape();
    const Index p = static_cast<Index>(dims.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(j);
    std::vector<Index> digits(p, 0);
    for (Index lin = 0; lin < input_dim(); ++lin) {
        Index b = 0;
        double s = 1.0;
        for (Index q = 0; q < p; ++q) {
            b += hashes_[q].bucket[digits[q]];
            s *= hashes_[q].sign[digits[q]];
        }
        out[b % j] += s * y[lin];
        for (Index q = p; q-- > 0;) {  // odometer
            if (++digits[q] < dims[q]) break;
            digits[q] = 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// sampling

SamplingDistribution sampling_distribution(const KrMatrix& m,
                                           bool* rank_deficient) {
    std::vector<Eigen::VectorXd> marginals;
    marginals.reserve(m.order());
    bool deficient = false;
    for (Index p = 0; p < m.order(); ++p) {
        LeverageProfile prof = leverage_scores(m.factor(p));
        if (prof.rank < m.cols()) deficient = true;
        marginals.push_back(prof.scores);
    }
    if (rank_deficient) *rank_deficient = deficient;
    // factorized() renormalizes each marginal; for full-rank factors this
    // divides by exactly rank = R.
    return SamplingDistribution::factorized(std::move(marginals));
}

SamplingSketch::SamplingSketch(std::vector<Index> shape, Index j,
                               std::uint64_t seed, const KrMatrix& target)
    : SketchOperator(SketchKind::Sampling, std::move(shape), j, seed) {
    if (target.shape() != this->shape())
        throw std::invalid_argument(
            "SamplingSketch: target shape does not match operator shape");
    SamplingDistribution q = sampling_distribution(target, &rank_deficient_);
    plan_ = draw_sample_plan(q, j, /*with_replacement=*/true,
                             derive_seed(seed, "sampling.plan"));
}

Eigen::VectorXd SamplingSketch::apply_kron_impl(const KronVector& v) const {
    const Index j = output_dim();
    Eigen::VectorXd out(j);
    for (Index k = 0; k < j; ++k)
        out[k] = plan_.rescale[k] * kron_row(v, plan_.indices[k]);
    return out;
}

Eigen::VectorXd SamplingSketch::apply_dense_impl(
    const Eigen::VectorXd& y) const {
    return apply_sample_plan(plan_, y);
}

// ---------------------------------------------------------------------------

std::unique_ptr<SketchOperator> make_sketch(SketchKind kind,
                                            std::vector<Index> shape, Index j,
                                            std::uint64_t seed,
                                            const SketchOptions& options) {
    switch (kind) {
        case SketchKind::Gaussian:
            return std::make_unique<GaussianSketch>(std::move(shape), j, seed,
                                                    options.materialize_cap);
        case SketchKind::Kfjlt:
            return std::make_unique<KfjltSketch>(std::move(shape), j, seed,
                                                 options.with_replacement);
        case SketchKind::Trp:
            return std::make_unique<TrpSketch>(std::move(shape), j, seed);
        case SketchKind::TensorSketch:
            return std::make_unique<TensorSketchOperator>(std::move(shape), j,
                                                          seed);
        case SketchKind::Sampling:
            if (!options.sampling_target)
                throw std::invalid_argument(
                    "make_sketch: the sampling kind needs a target matrix "
                    "(options.sampling_target)");
            return std::make_unique<SamplingSketch>(
                std::move(shape), j, seed, *options.sampling_target);
    }
    throw std::invalid_argument("make_sketch: unknown kind");
}

}  // namespace kronsketch

#include "kronsketch/cp.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "kronsketch/rng.hpp"

namespace kronsketch {

CpTensor::CpTensor(std::vector<Eigen::MatrixXd> factors_in)
    : factors(std::move(factors_in)) {
    if (factors.empty())
        throw std::invalid_argument("CpTensor: need at least one factor");
    const Index r = factors.front().cols();
    if (r < 1) throw std::invalid_argument("CpTensor: rank must be >= 1");
    for (const auto& f : factors)
        if (f.cols() != r)
            throw std::invalid_argument(
                "CpTensor: factors must share the same rank");
}

std::vector<Index> CpTensor::shape() const {
    std::vector<Index> s;
    s.reserve(factors.size());
    for (const auto& f : factors) s.push_back(f.rows());
    return s;
}

StackedKr stack_cp_pair(const CpTensor& a, const CpTensor& b) {
    if (a.shape() != b.shape())
        throw std::invalid_argument("stack_cp_pair: shape mismatch");
    if (a.rank() != b.rank())
        throw std::invalid_argument("stack_cp_pair: rank mismatch");
    const Index r = a.rank();
    std::vector<Eigen::MatrixXd> stacked;
    stacked.reserve(a.factors.size());
    for (std::size_t p = 0; p < a.factors.size(); ++p) {
        Eigen::MatrixXd f(a.factors[p].rows(), 2 * r);
        f.leftCols(r) = a.factors[p];
        f.rightCols(r) = b.factors[p];
        stacked.push_back(std::move(f));
    }
    StackedKr out{KrMatrix(std::move(stacked)), Eigen::VectorXd(2 * r)};
    out.u.head(r).setOnes();
    out.u.tail(r).setConstant(-1.0);
    return out;
}

double cp_distance_exact(const CpTensor& a, const CpTensor& b) {
    const StackedKr s = stack_cp_pair(a, b);
    Eigen::MatrixXd gram =
        Eigen::MatrixXd::Ones(s.stacked.cols(), s.stacked.cols());
    for (Index p = 0; p < s.stacked.order(); ++p) {
        const Eigen::MatrixXd& f = s.stacked.factor(p);
        gram = gram.cwiseProduct(Eigen::MatrixXd(f.transpose() * f));
    }
    const double d2 = s.u.dot(gram * s.u);
    return d2 > 0.0 ? std::sqrt(d2) : 0.0;
}

double cp_distance_sketched(const CpTensor& a, const CpTensor& b,
                            const SketchOperator& op) {
    const StackedKr s = stack_cp_pair(a, b);
    return (op.apply(s.stacked) * s.u).norm();
}

DenseTensor cp_reconstruct(const CpTensor& t, Index cap) {
    const auto shape = t.shape();
    const Index dim = shape_dim(shape);
    if (dim > cap)
        throw std::length_error(
            "cp_reconstruct: tensor too large to materialize");
    Eigen::VectorXd data = Eigen::VectorXd::Zero(dim);
    for (Index r = 0; r < t.rank(); ++r) {
        std::vector<Eigen::VectorXd> cols;
        cols.reserve(t.factors.size());
        for (const auto& f : t.factors) cols.push_back(f.col(r));
        data += materialize(KronVector(std::move(cols)), cap);
    }
    return DenseTensor(shape, std::move(data));
}

namespace {

// M(i_n, r) = sum over all entries with digit n equal to i_n of
// T[i] * prod_{q != n} F_q(i_q, r). Single odometer pass over the tensor.
Eigen::MatrixXd mttkrp(const DenseTensor& t,
                       const std::vector<Eigen::MatrixXd>& factors,
                       Index mode) {
    const Index p = static_cast<Index>(factors.size());
    const Index r = factors.front().cols();
    Eigen::MatrixXd out =
        Eigen::MatrixXd::Zero(t.shape[mode], r);
    std::vector<Index> digits(p, 0);
    Eigen::RowVectorXd w(r);
    for (Index lin = 0; lin < t.dim(); ++lin) {
        const double val = t.data[lin];
        if (val != 0.0) {
            w.setConstant(val);
            for (Index q = 0; q < p; ++q)
                if (q != mode) w = w.cwiseProduct(factors[q].row(digits[q]));
            out.row(digits[mode]) += w;
        }
        for (Index q = p; q-- > 0;) {
            if (++digits[q] < t.shape[q]) break;
            digits[q] = 0;
        }
    }
    return out;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& f) {
    return f.transpose() * f;
}

}  // namespace

CpAlsResult cp_als(const DenseTensor& t, Index rank, Index max_iters,
                   std::uint64_t seed, double fit_tol) {
    const Index p = static_cast<Index>(t.shape.size());
    if (rank < 1) throw std::invalid_argument("cp_als: rank must be >= 1");
    if (max_iters < 1)
        throw std::invalid_argument("cp_als: need at least one iteration");

    CpAlsResult result;
    result.factors.reserve(p);
    {
        std::normal_distribution<double> normal;
        for (Index q = 0; q < p; ++q) {
            auto rng = make_rng(derive_seed(seed, "cpals.init", q));
            Eigen::MatrixXd f(t.shape[q], rank);
            for (Index c = 0; c < rank; ++c)
                for (Index i = 0; i < f.rows(); ++i) f(i, c) = normal(rng);
            result.factors.push_back(std::move(f));
        }
    }

    std::vector<Eigen::MatrixXd> grams(p);
    for (Index q = 0; q < p; ++q) grams[q] = gram(result.factors[q]);

    const double tnorm2 = t.data.squaredNorm();
    const double tnorm = std::sqrt(tnorm2);
    double prev_fit = -std::numeric_limits<double>::infinity();

    for (Index it = 0; it < max_iters; ++it) {
        for (Index mode = 0; mode < p; ++mode) {
            Eigen::MatrixXd h = Eigen::MatrixXd::Ones(rank, rank);
            for (Index q = 0; q < p; ++q)
                if (q != mode) h = h.cwiseProduct(grams[q]);

            const Eigen::MatrixXd m = mttkrp(t, result.factors, mode);

            // Solve A h = m row-wise; h is symmetric PSD. Fall back to a
            // clamped eigendecomposition when it is numerically singular.
            Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
            const double hmax = h.cwiseAbs().maxCoeff();
            if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                ldlt.vectorD().minCoeff() > 1e-12 * hmax) {
                result.factors[mode] = ldlt.solve(m.transpose()).transpose();
            } else {
                result.gram_clamped = true;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
                Eigen::VectorXd vals = eig.eigenvalues();
                const double clamp = 1e-12 * vals.cwiseAbs().maxCoeff();
                for (Index i = 0; i < vals.size(); ++i)
                    vals[i] = std::max(vals[i], clamp);
                const Eigen::MatrixXd hinv = eig.eigenvectors() *
                                             vals.cwiseInverse().asDiagonal() *
                                             eig.eigenvectors().transpose();
                result.factors[mode] = m * hinv;
            }
            grams[mode] = gram(result.factors[mode]);
        }

        // Push column norms of factors 2..P into factor 1.
        if (p > 1) {
            Eigen::VectorXd scale = Eigen::VectorXd::Ones(rank);
            for (Index q = 1; q < p; ++q) {
                for (Index c = 0; c < rank; ++c) {
                    const double nrm = result.factors[q].col(c).norm();
                    if (nrm > 0.0) {
                        result.factors[q].col(c) /= nrm;
                        scale[c] *= nrm;
                    }
                }
                grams[q] = gram(result.factors[q]);
            }
            result.factors[0] = result.factors[0] * scale.asDiagonal();
            grams[0] = gram(result.factors[0]);
        }

        // ||T - That||^2 = ||T||^2 - 2 <T, That> + ||That||^2 with
        // <T, That> = <mttkrp(T, mode), factor_mode> for any mode.
        Eigen::MatrixXd all = Eigen::MatrixXd::Ones(rank, rank);
        for (Index q = 0; q < p; ++q) all = all.cwiseProduct(grams[q]);
        const double model2 = all.sum();
        const double inner =
            mttkrp(t, result.factors, p - 1)
                .cwiseProduct(result.factors[p - 1])
                .sum();
        const double err2 = std::max(0.0, tnorm2 - 2.0 * inner + model2);
        const double err = std::sqrt(err2);
        result.error_history.push_back(err);
        result.iterations = it + 1;

        const double fit = tnorm > 0.0 ? 1.0 - err / tnorm : 1.0;
        if (std::abs(fit - prev_fit) < fit_tol) break;
        prev_fit = fit;
    }
    return result;
}

// ---------------------------------------------------------------------------
// on-disk format

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    return __builtin_bswap64(v);
}

double double_to_le(double v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    bits = __builtin_bswap64(bits);
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_matrix_file(const std::filesystem::path& path,
                       const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_matrix_file: cannot open " +
                                 path.string());
    const std::uint64_t header[2] = {
        to_little_endian(static_cast<std::uint64_t>(m.rows())),
        to_little_endian(static_cast<std::uint64_t>(m.cols()))};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r) {
            const double v = double_to_le(m(r, c));
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    if (!out)
        throw std::runtime_error("write_matrix_file: write failed for " +
                                 path.string());
}

Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_matrix_file: cannot open " +
                                 path.string());
    std::uint64_t header[2];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw std::runtime_error("read_matrix_file: truncated header");
    const auto rows = static_cast<Index>(to_little_endian(header[0]));
    const auto cols = static_cast<Index>(to_little_endian(header[1]));
    if (rows < 0 || cols < 0)
        throw std::runtime_error("read_matrix_file: bad dimensions");
    Eigen::MatrixXd m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) {
            double v;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            if (!in)
                throw std::runtime_error("read_matrix_file: truncated data");
            m(r, c) = double_to_le(v);
        }
    return m;
}

void write_cp_tensor(const std::filesystem::path& dir, const CpTensor& t) {
    std::filesystem::create_directories(dir);
    for (std::size_t p = 0; p < t.factors.size(); ++p)
        write_matrix_file(dir / ("factor_" + std::to_string(p) + ".bin"),
                          t.factors[p]);
}

CpTensor read_cp_tensor(const std::filesystem::path& dir) {
    std::vector<Eigen::MatrixXd> factors;
    for (std::size_t p = 0;; ++p) {
        const auto path = dir / ("factor_" + std::to_string(p) + ".bin");
        if (!std::filesystem::exists(path)) break;
        factors.push_back(read_matrix_file(path));
    }
    if (factors.empty())
        throw std::runtime_error("read_cp_tensor: no factor_*.bin files in " +
                                 dir.string());
    return CpTensor(std::move(factors));
}

}  // namespace kronsketch

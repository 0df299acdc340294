#include "kronsketch/hadamard.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kronsketch/rng.hpp"

namespace kronsketch {

bool is_pow2(Index n) {
    return n > 0 && std::has_single_bit(static_cast<std::uint64_t>(n));
}

Index next_pow2(Index n) {
    if (n < 1)
        throw std::invalid_argument("next_pow2: size must be >= 1");
    return static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(n)));
}

void fwht_inplace(std::span<double> x) {
    const Index n = static_cast<Index>(x.size());
    if (!is_pow2(n))
        throw std::invalid_argument(
            "fwht: length " + std::to_string(n) +
            " is not a power of two; zero-pad to " +
            std::to_string(n < 1 ? 1 : next_pow2(n)) + " first (pad_pow2)");
    for (Index h = 1; h < n; h <<= 1) {
        for (Index i = 0; i < n; i += h << 1) {
            for (Index j = i; j < i + h; ++j) {
                const double a = x[j];
                const double b = x[j + h];
                x[j] = a + b;
                x[j + h] = a - b;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index i = 0; i < n; ++i) x[i] *= scale;
}

Eigen::VectorXd fwht(const Eigen::VectorXd& x) {
    Eigen::VectorXd out = x;
    fwht_inplace(std::span<double>(out.data(), out.size()));
    return out;
}

Eigen::VectorXd pad_pow2(const Eigen::VectorXd& x) {
    if (x.size() <= 1 || is_pow2(x.size())) return x;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(next_pow2(x.size()));
    out.head(x.size()) = x;
    return out;
}

RademacherDiagonal make_rademacher(Index n, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("make_rademacher: size must be >= 1");
    RademacherDiagonal d;
    d.seed = seed;
    d.signs.resize(n);
    auto rng = make_rng(seed);
    for (Index i = 0; i < n; ++i)
        d.signs[i] = (rng() & 1u) ? 1.0 : -1.0;
    return d;
}

RandomizedHadamard::RandomizedHadamard(Index n, std::uint64_t seed)
    : RandomizedHadamard(make_rademacher(n, seed)) {}

RandomizedHadamard::RandomizedHadamard(RademacherDiagonal diag)
    : diag_(std::move(diag)) {
    if (!is_pow2(diag_.signs.size()))
        throw std::invalid_argument(
            "RandomizedHadamard: size must be a power of two");
}

Eigen::VectorXd RandomizedHadamard::apply(const Eigen::VectorXd& x) const {
    if (x.size() != diag_.signs.size())
        throw std::invalid_argument("RandomizedHadamard: length mismatch");
    Eigen::VectorXd out = diag_.signs.cwiseProduct(x);
    fwht_inplace(std::span<double>(out.data(), out.size()));
    return out;
}

}  // namespace kronsketch

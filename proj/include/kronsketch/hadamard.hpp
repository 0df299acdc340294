#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>

#include "kronsketch/core.hpp"

namespace kronsketch {

bool is_pow2(Index n);

// Next power of two >= n (n >= 1).
Index next_pow2(Index n);

// Normalized Walsh-Hadamard transform, natural (Sylvester) ordering.
// In-place butterfly, O(n log n); the transform matrix is orthogonal and
// symmetric, so applying twice restores the input. Length must be a power
// of two; callers with other sizes must pad explicitly (pad_pow2), silent
// padding is not done here.
void fwht_inplace(std::span<double> x);
Eigen::VectorXd fwht(const Eigen::VectorXd& x);

// Zero-pad to the next power of two; returns the input unchanged if the
// length already is one.
Eigen::VectorXd pad_pow2(const Eigen::VectorXd& x);

// Diagonal of i.i.d. +/-1 signs, reproducible from its seed.
struct RademacherDiagonal {
    Eigen::VectorXd signs;
    std::uint64_t seed = 0;
};

RademacherDiagonal make_rademacher(Index n, std::uint64_t seed);

// Randomized Hadamard transform x -> H D x with a sign flip followed by the
// normalized Hadamard transform. Orthogonal; size must be a power of two.
class RandomizedHadamard {
  public:
    RandomizedHadamard(Index n, std::uint64_t seed);
    explicit RandomizedHadamard(RademacherDiagonal diag);

    Index size() const { return diag_.signs.size(); }
    const RademacherDiagonal& diagonal() const { return diag_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  private:
    RademacherDiagonal diag_;
};

}  // namespace kronsketch

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

#include "kronsketch/core.hpp"
#include "kronsketch/sketch.hpp"

namespace kronsketch {

// Rank-R CP format tensor: P factor matrices, factor p of shape I_p x R.
// Component weights are absorbed into factor 1 (no separate weight vector).
struct CpTensor {
    std::vector<Eigen::MatrixXd> factors;

    explicit CpTensor(std::vector<Eigen::MatrixXd> factors_in);

    Index order() const { return static_cast<Index>(factors.size()); }
    Index rank() const { return factors.front().cols(); }
    std::vector<Index> shape() const;
};

// The 2R-column Khatri-Rao matrix [X, Y] built from two CP tensors of the
// same shape, with the sign vector u (+1 on the first R entries, -1 on the
// last R). ||[X, Y] u|| equals the Frobenius distance of the two tensors.
struct StackedKr {
    KrMatrix stacked;
    Eigen::VectorXd u;
};

StackedKr stack_cp_pair(const CpTensor& a, const CpTensor& b);

// Frobenius distance of two CP tensors without materialization, through the
// 2R x 2R Gram matrix of the stacked Khatri-Rao matrix (an entrywise
// product of factor Grams). Tiny negative round-off is clamped to zero.
double cp_distance_exact(const CpTensor& a, const CpTensor& b);

// ||op([X, Y]) u||: the sketched estimate of the Frobenius distance. Cost
// independent of the ambient dimension for the structured kinds.
double cp_distance_sketched(const CpTensor& a, const CpTensor& b,
                            const SketchOperator& op);

// Dense reconstruction of a CP tensor (desk scale).
DenseTensor cp_reconstruct(const CpTensor& t, Index cap = kMaterializeCap);

struct CpAlsResult {
    std::vector<Eigen::MatrixXd> factors;
    // Reconstruction error ||T - That||_F after each sweep.
    std::vector<double> error_history;
    Index iterations = 0;
    bool gram_clamped = false;

    CpTensor tensor() const { return CpTensor(factors); }
};

// Alternating least squares fit of a rank-R CP model to a dense tensor.
// Per mode, the Khatri-Rao-structured normal equations are solved through
// the entrywise product of the other factors' Grams; factors start from
// seeded standard normals; columns of factors 2..P are renormalized each
// sweep with the norms pushed into factor 1. Stops at max_iters or when the
// relative fit change drops below fit_tol. A singular Gram system falls
// back to an eigenvalue clamp at 1e-12 of the largest (gram_clamped set).
CpAlsResult cp_als(const DenseTensor& t, Index rank, Index max_iters = 50,
                   std::uint64_t seed = 0, double fit_tol = 1e-6);

// On-disk format for a CP tensor: a directory of P files factor_0.bin ...
// factor_{P-1}.bin. Each file is a little-endian binary matrix: two
// uint64 header words (rows, cols) followed by rows*cols float64 values in
// column-major order.
void write_matrix_file(const std::filesystem::path& path,
                       const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path);

void write_cp_tensor(const std::filesystem::path& dir, const CpTensor& t);
CpTensor read_cp_tensor(const std::filesystem::path& dir);

}  // namespace kronsketch

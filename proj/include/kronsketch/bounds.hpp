#pragma once

#include <vector>

#include "kronsketch/core.hpp"

namespace kronsketch {

// Base used for the asymptotic bounds whose statements do not pin one down
// (j_simplified, j_jin). The exact bounds always use natural log.
enum class LogBase { E, Two, Ten };

double log_in_base(double x, LogBase base);

// Parameters of the embedding-dimension calculators: factor sizes I_p,
// column count R, point-set size N, distortion eps, failure probabilities
// delta (overall) and eta (per-stage).
struct BoundInputs {
    std::vector<Index> dims;
    Index r = 1;
    Index n = 1;
    double eps = 0.5;
    double delta = 0.01;
    double eta = 0.01;
};

// Minimum rows for leverage-score row sampling to preserve the singular
// values of a rank-R basis within 1 +/- eps, with failure probability eta
// and sampling-distribution quality beta:
//   (8/3) R ln(2R/eta) / (beta eps^2)
double j_sampling(Index r, double eta, double eps, double beta = 1.0);

// Embedding dimension for the Kronecker-structured subspace embedding:
//   (8/3) 2^P R^{P+1} eps^-2 ln(2R(P+1)/delta) prod_p ln(2 I_p R (P+1)/delta)
double j_subspace(const BoundInputs& b);

// Same bound parametrized by the per-stage failure probability eta instead
// of the overall delta (the pre-union-bound form):
//   (8/3) 2^P R^{P+1} eps^-2 ln(2R/eta) prod_p ln(2 I_p R/eta)
double j_subspace_stage(const BoundInputs& b, double eta);

// Embedding dimension for preserving all pairwise distances among N
// Kronecker-structured points:
//   (16/3) 4^P eps^-2 ln(4N^2(P+1)/delta) prod_p ln(4 I_p N^2 (P+1)/delta)
double j_jlt(const BoundInputs& b);

// Simplified large-N form, valid under N > max(P, 4); the absolute
// constants are caller-supplied (default 1), so cross-bound comparisons at
// the defaults are qualitative only:
//   C1 eps^-2 C2^P log(N/delta) prod_p log(I_p N/delta)
double j_simplified(const BoundInputs& b, double c1 = 1.0, double c2 = 1.0,
                    LogBase base = LogBase::E);

// Comparison bound from the analysis of Jin, Kolda & Ward for the same
// transform on arbitrary vectors; caller-supplied constant:
//   C eps^-2 log^{2P-1}(PN/delta) log^4(eps^-1 log^P(PN/delta)) log(prod I_p)
// All log arguments must exceed 1 (the bound is asymptotic).
double j_jin(const BoundInputs& b, double c = 1.0, LogBase base = LogBase::E);

// Sampling-quality constant for uniform row sampling after per-factor
// randomized Hadamard mixing: beta with
//   beta^-1 = prod_p 2R ln(2 I_p R / eta)
// Clamped to at most 1.
double beta_kfjlt(const BoundInputs& b);

}  // namespace kronsketch

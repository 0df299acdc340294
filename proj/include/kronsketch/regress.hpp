#pragma once

#include <Eigen/Dense>

#include <optional>

#include "kronsketch/core.hpp"
#include "kronsketch/sketch.hpp"

namespace kronsketch {

// min_z ||X z - y|| with a Khatri-Rao design and an arbitrary dense right
// hand side. The design must have full column rank (checked numerically via
// the Hadamard product of factor Grams at construction).
struct LsProblem {
    LsProblem(KrMatrix design_in, Eigen::VectorXd rhs_in);

    KrMatrix design;
    Eigen::VectorXd rhs;
};

struct LsReport {
    Eigen::VectorXd zhat;
    double sketched_residual = 0.0;
    double true_residual = 0.0;
    // Exact optimum and residual ratio; present only when the design fits
    // under the materialization cap (no silent approximation above it).
    std::optional<double> opt;
    std::optional<double> ratio;
};

// Minimizes the sketched residual ||S(Xz - y)|| through an orthogonal
// factorization of the sketched design. The design is sketched on the fast
// factorized path; the right hand side through the dense path.
LsReport solve_sketched(const LsProblem& p, const SketchOperator& op,
                        Index cap = kMaterializeCap);

// Diagnostic quantities behind the residual guarantee: the smallest squared
// singular value of the sketched orthonormal design basis, and
// ||U^T S^T S y_perp||^2 / OPT^2. Desk scale only (materializes the design).
// Throws if the system is consistent (OPT = 0, ratio undefined).
struct PerpAudit {
    double sigma_min_sq = 0.0;
    double perp_ratio = 0.0;
};

PerpAudit audit_perp(const LsProblem& p, const SketchOperator& op,
                     Index cap = kMaterializeCap);

}  // namespace kronsketch

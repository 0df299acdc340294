#include "kronsketch/regress.hpp"

#include <cmath>
#include <stdexcept>

namespace kronsketch {

namespace {

// Gram matrix of a Khatri-Rao product: entrywise product of factor Grams.
Eigen::MatrixXd kr_gram(const KrMatrix& m) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Ones(m.cols(), m.cols());
    for (Index p = 0; p < m.order(); ++p) {
        const Eigen::MatrixXd& f = m.factor(p);
        g = g.cwiseProduct(Eigen::MatrixXd(f.transpose() * f));
    }
    return g;
}

// <column r of m, y> for every r, without materializing m.
Eigen::VectorXd kr_dense_products(const KrMatrix& m,
                                  const Eigen::VectorXd& y) {
    Eigen::VectorXd out(m.cols());
    std::vector<Eigen::VectorXd> cols(m.order());
    for (Index r = 0; r < m.cols(); ++r) {
        for (Index p = 0; p < m.order(); ++p) cols[p] = m.factor(p).col(r);
        out[r] = kron_dense_dot(cols, y);
    }
    return out;
}

}  // namespace

LsProblem::LsProblem(KrMatrix design_in, Eigen::VectorXd rhs_in)
    : design(std::move(design_in)), rhs(std::move(rhs_in)) {
    if (rhs.size() != design.rows())
        throw std::invalid_argument(
            "LsProblem: right hand side length does not match the design");
    const Eigen::MatrixXd g = kr_gram(design);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    const double emax = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double tol = static_cast<double>(design.cols()) * emax * 1e-12;
    if (!(emax > 0.0) || eig.eigenvalues().minCoeff() <= tol)
        throw std::invalid_argument(
            "LsProblem: design is numerically rank deficient");
}

LsReport solve_sketched(const LsProblem& p, const SketchOperator& op,
                        Index cap) {
    const Index r = p.design.cols();
    if (op.input_dim() != p.design.rows())
        throw std::invalid_argument("solve_sketched: operator shape mismatch");
    if (op.output_dim() < r)
        throw std::invalid_argument(
            "solve_sketched: J must be at least the column count");

    const Eigen::MatrixXd sa = op.apply(p.design);
    const Eigen::VectorXd sy = op.apply_dense(p.rhs);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sa);
    if (qr.rank() < r)
        throw std::runtime_error(
            "solve_sketched: sketched design is rank deficient (J too small "
            "or an unlucky seed)");

    LsReport report;
    report.zhat = qr.solve(sy);
    report.sketched_residual = (sa * report.zhat - sy).norm();

    // ||X z - y||^2 = z^T G z - 2 z^T (X^T y) + ||y||^2, all factorized.
    const Eigen::MatrixXd g = kr_gram(p.design);
    const Eigen::VectorXd xty = kr_dense_products(p.design, p.rhs);
    const double res2 = report.zhat.dot(g * report.zhat) -
                        2.0 * report.zhat.dot(xty) + p.rhs.squaredNorm();
    report.true_residual = res2 > 0.0 ? std::sqrt(res2) : 0.0;

    if (p.design.rows() <= cap) {
        const Eigen::MatrixXd dense = materialize(p.design, cap);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> exact(dense);
        const Eigen::VectorXd zstar = exact.solve(p.rhs);
        report.opt = (dense * zstar - p.rhs).norm();
        if (*report.opt > 0.0)
            report.ratio = report.true_residual / *report.opt;
    }
    return report;
}

PerpAudit audit_perp(const LsProblem& p, const SketchOperator& op,
                     Index cap) {
    if (p.design.rows() > cap)
        throw std::length_error(
            "audit_perp: design too large to materialize for the audit");
    if (op.input_dim() != p.design.rows())
        throw std::invalid_argument("audit_perp: operator shape mismatch");

    const Eigen::MatrixXd dense = materialize(p.design, cap);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU);
    const Eigen::MatrixXd u = svd.matrixU();

    const Eigen::VectorXd y_perp = p.rhs - u * (u.transpose() * p.rhs);
    const double opt = y_perp.norm();
    if (!(opt > 0.0))
        throw std::runtime_error(
            "audit_perp: consistent system (OPT = 0), ratio undefined");

    Eigen::MatrixXd su(op.output_dim(), u.cols());
    for (Index c = 0; c < u.cols(); ++c)
        su.col(c) = op.apply_dense(u.col(c));

    PerpAudit audit;
    Eigen::JacobiSVD<Eigen::MatrixXd> su_svd(su);
    const double smin = su_svd.singularValues().tail(1)(0);
    audit.sigma_min_sq = smin * smin;

    const Eigen::VectorXd sy_perp = op.apply_dense(y_perp);
    audit.perp_ratio = (su.transpose() * sy_perp).squaredNorm() / (opt * opt);
    return audit;
}

}  // namespace kronsketch

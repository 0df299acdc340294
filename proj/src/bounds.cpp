#include "kronsketch/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace kronsketch {

double log_in_base(double x, LogBase base) {
    switch (base) {
        case LogBase::E:
            return std::log(x);
        case LogBase::Two:
            return std::log2(x);
        case LogBase::Ten:
            return std::log10(x);
    }
    return std::log(x);
}

namespace {

void validate(const BoundInputs& b, bool need_eta = false) {
    if (b.dims.empty())
        throw std::invalid_argument("bounds: need at least one dimension");
    for (Index d : b.dims)
        if (d < 1)
            throw std::invalid_argument("bounds: dimensions must be >= 1");
    if (b.r < 1 || b.n < 1)
        throw std::invalid_argument("bounds: R and N must be >= 1");
    if (!(b.eps > 0.0 && b.eps < 1.0))
        throw std::invalid_argument("bounds: eps must lie strictly in (0,1)");
    if (!(b.delta > 0.0 && b.delta < 1.0))
        throw std::invalid_argument("bounds: delta must lie strictly in (0,1)");
    if (need_eta && !(b.eta > 0.0 && b.eta < 1.0))
        throw std::invalid_argument("bounds: eta must lie strictly in (0,1)");
}

}  // namespace

double j_sampling(Index r, double eta, double eps, double beta) {
    if (r < 1)
        throw std::invalid_argument("j_sampling: R must be >= 1");
    if (!(eps > 0.0 && eps < 1.0) || !(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument(
            "j_sampling: eps and eta must lie strictly in (0,1)");
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("j_sampling: beta must lie in (0,1]");
    const double rd = static_cast<double>(r);
    return (8.0 / 3.0) * rd * std::log(2.0 * rd / eta) / (beta * eps * eps);
}

double j_subspace(const BoundInputs& b) {
    validate(b);
    const double p = static_cast<double>(b.dims.size());
    const double rd = static_cast<double>(b.r);
    double value = (8.0 / 3.0) * std::pow(2.0, p) * std::pow(rd, p + 1.0) /
                   (b.eps * b.eps) *
                   std::log(2.0 * rd * (p + 1.0) / b.delta);
    for (Index ip : b.dims)
        value *= std::log(2.0 * static_cast<double>(ip) * rd * (p + 1.0) /
                          b.delta);
    return value;
}

double j_subspace_stage(const BoundInputs& b, double eta) {
    validate(b);
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument(
            "j_subspace_stage: eta must lie strictly in (0,1)");
    const double p = static_cast<double>(b.dims.size());
    const double rd = static_cast<double>(b.r);
    double value = (8.0 / 3.0) * std::pow(2.0, p) * std::pow(rd, p + 1.0) /
                   (b.eps * b.eps) * std::log(2.0 * rd / eta);
    for (Index ip : b.dims)
        value *= std::log(2.0 * static_cast<double>(ip) * rd / eta);
    return value;
}

double j_jlt(const BoundInputs& b) {
    validate(b);
    const double p = static_cast<double>(b.dims.size());
    const double n2 = static_cast<double>(b.n) * static_cast<double>(b.n);
    double value = (16.0 / 3.0) * std::pow(4.0, p) / (b.eps * b.eps) *
                   std::log(4.0 * n2 * (p + 1.0) / b.delta);
    for (Index ip : b.dims)
        value *= std::log(4.0 * static_cast<double>(ip) * n2 * (p + 1.0) /
                          b.delta);
    return value;
}

double j_simplified(const BoundInputs& b, double c1, double c2, LogBase base) {
    validate(b);
    const Index p = static_cast<Index>(b.dims.size());
    if (b.n <= std::max<Index>(p, 4))
        throw std::invalid_argument(
            "j_simplified: requires N > max(P, 4); got N = " +
            std::to_string(b.n) + ", P = " + std::to_string(p));
    const double nd = static_cast<double>(b.n);
    double value = c1 / (b.eps * b.eps) *
                   std::pow(c2, static_cast<double>(p)) *
                   log_in_base(nd / b.delta, base);
    for (Index ip : b.dims)
        value *= log_in_base(static_cast<double>(ip) * nd / b.delta, base);
    return value;
}

double j_jin(const BoundInputs& b, double c, LogBase base) {
    validate(b);
    const double p = static_cast<double>(b.dims.size());
    const double nd = static_cast<double>(b.n);

    const double arg1 = p * nd / b.delta;
    double prod_dims = 1.0;
    for (Index ip : b.dims) prod_dims *= static_cast<double>(ip);
    if (!(arg1 > 1.0))
        throw std::invalid_argument(
            "j_jin: log argument P*N/delta must exceed 1");
    if (!(prod_dims > 1.0))
        throw std::invalid_argument(
            "j_jin: log argument prod(I_p) must exceed 1");

    const double log1 = log_in_base(arg1, base);
    const double arg2 = std::pow(log1, p) / b.eps;
    if (!(arg2 > 1.0))
        throw std::invalid_argument(
            "j_jin: log argument eps^-1 log^P(PN/delta) must exceed 1");

    return c / (b.eps * b.eps) * std::pow(log1, 2.0 * p - 1.0) *
           std::pow(log_in_base(arg2, base), 4.0) *
           log_in_base(prod_dims, base);
}

double beta_kfjlt(const BoundInputs& b) {
    validate(b, /*need_eta=*/true);
    const double rd = static_cast<double>(b.r);
    double inv = 1.0;
    for (Index ip : b.dims)
        inv *= 2.0 * rd *
               std::log(2.0 * static_cast<double>(ip) * rd / b.eta);
    const double beta = 1.0 / inv;
    return beta > 1.0 ? 1.0 : beta;
}

}  // namespace kronsketch

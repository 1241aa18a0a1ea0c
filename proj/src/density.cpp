#include "mminet/density.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "mminet/errors.hpp"

namespace mminet {

Vector silverman_bandwidth(const Eigen::Ref<const Matrix>& points) {
    const Index m = points.rows();
    const Index d = points.cols();
    if (m < 2) throw DataError("silverman_bandwidth needs at least 2 points");

    const double factor =
        std::pow(4.0 / ((static_cast<double>(d) + 2.0) * static_cast<double>(m)),
                 1.0 / (static_cast<double>(d) + 4.0));

    Vector h_diag(d);
    bool floored = false;
    for (Index i = 0; i < d; ++i) {
        const double mean = points.col(i).mean();
        const double var = (points.col(i).array() - mean).square().sum() /
                           static_cast<double>(m - 1);
        double h = std::sqrt(var) * factor;
        if (!(h > 1e-6)) {
            h = 1e-6;
            floored = true;
        }
        h_diag[i] = h * h;
    }
    if (floored)
        std::cerr << "warning: degenerate spread in reference points; "
                     "bandwidth floored at 1e-6\n";
    return h_diag;
}

double log_kernel(const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& bandwidth_diag) {
    const double d = static_cast<double>(u.size());
    const double log_det = bandwidth_diag.array().log().sum();
    const double quad = (u.array().square() / bandwidth_diag.array()).sum();
    return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det + quad);
}

KdeContext KdeContext::build(std::vector<Matrix> refs, const Vector& priors) {
    if (refs.empty()) throw DataError("KdeContext: no classes");
    if (priors.size() != static_cast<Index>(refs.size()))
        throw DataError("KdeContext: prior count does not match class count");
    if (std::abs(priors.sum() - 1.0) > 1e-12)
        throw DataError("KdeContext: priors must sum to 1");

    KdeContext ctx;
    ctx.class_refs = std::move(refs);
    ctx.bandwidths.reserve(ctx.class_refs.size());
    const Index d = ctx.class_refs.front().cols();
    for (const auto& points : ctx.class_refs) {
        if (points.rows() < 2)
            throw DataError("KdeContext: every class needs at least 2 reference points");
        if (points.cols() != d)
            throw DataError("KdeContext: inconsistent reference dimensionality");
        ctx.bandwidths.push_back(silverman_bandwidth(points));
    }
    ctx.log_priors = priors.array().log();
    return ctx;
}

double log_class_density(const Eigen::Ref<const Vector>& y, const KdeContext& ctx,
                         int c) {
    const auto& refs = ctx.class_refs[static_cast<size_t>(c)];
    const auto& h = ctx.bandwidths[static_cast<size_t>(c)];
    const Index m = refs.rows();

    Vector log_terms(m);
    for (Index j = 0; j < m; ++j)
        log_terms[j] = log_kernel(y - refs.row(j).transpose(), h);
    return log_sum_exp(log_terms) - std::log(static_cast<double>(m));
}

Vector grad_log_class_density(const Eigen::Ref<const Vector>& y, const KdeContext& ctx,
                              int c) {
    const auto& refs = ctx.class_refs[static_cast<size_t>(c)];
    const auto& h = ctx.bandwidths[static_cast<size_t>(c)];
    const Index m = refs.rows();

    Vector log_terms(m);
    for (Index j = 0; j < m; ++j)
        log_terms[j] = log_kernel(y - refs.row(j).transpose(), h);
    const double z = log_sum_exp(log_terms);

    Vector grad = Vector::Zero(y.size());
    for (Index j = 0; j < m; ++j) {
        const double w = std::exp(log_terms[j] - z);
        grad += w * ((refs.row(j).transpose() - y).array() / h.array()).matrix();
    }
    return grad;
}

}  // namespace mminet

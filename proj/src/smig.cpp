#include "mminet/smig.hpp"

#include <cmath>

#include "mminet/errors.hpp"

namespace mminet {

std::pair<double, Vector> posterior_from_log_joint(const Eigen::Ref<const Vector>& a) {
    const double z = log_sum_exp(a);
    Vector w = (a.array() - z).exp();
    return {z, std::move(w)};
}

SmigEvaluation instantaneous_loss(const Eigen::Ref<const Vector>& y,
                                  const KdeContext& ctx) {
    const int L = ctx.num_classes();
    SmigEvaluation ev;
    ev.log_cond.resize(L);
    ev.log_joint.resize(L);

    std::vector<Vector> cond_grads(static_cast<size_t>(L));
    for (int c = 0; c < L; ++c) {
        ev.log_cond[c] = log_class_density(y, ctx, c);
        cond_grads[static_cast<size_t>(c)] = grad_log_class_density(y, ctx, c);
        ev.log_joint[c] = ctx.log_priors[c] + ev.log_cond[c];
    }

    auto [z, w] = posterior_from_log_joint(ev.log_joint);
    ev.posterior = std::move(w);
    ev.loss = z - ev.posterior.dot(ev.log_cond);

    // d loss / dy = -sum_c w_c (l_c - m_l) g_c where l_c = log p(y|c),
    // g_c its gradient and m_l the posterior mean of l. The logsumexp term
    // and the softmax weights' own y-dependence cancel into this form.
    const double mean_log_cond = ev.posterior.dot(ev.log_cond);
    ev.grad_y = Vector::Zero(y.size());
    for (int c = 0; c < L; ++c)
        ev.grad_y -= ev.posterior[c] * (ev.log_cond[c] - mean_log_cond) *
                     cond_grads[static_cast<size_t>(c)];
    return ev;
}

SmigStep smig_step_gradients(const ProjectionNetwork& net,
                             const Eigen::Ref<const Vector>& x, const KdeContext& ctx) {
    ForwardTape tape;
    const Vector y = forward(net, x, &tape);
    SmigStep step;
    step.evaluation = instantaneous_loss(y, ctx);
    step.loss = step.evaluation.loss;
    step.gradients = backward(net, tape, step.evaluation.grad_y);
    return step;
}

SmigStep smig_training_gradients(const ProjectionNetwork& net,
                                 const Eigen::Ref<const Vector>& x_t,
                                 const KdeContext& ctx, const BatchTape& reference_tape,
                                 const std::vector<std::vector<Index>>& ref_rows) {
    ForwardTape tape;
    const Vector y = forward(net, x_t, &tape);

    SmigStep step;
    step.evaluation = instantaneous_loss(y, ctx);
    step.loss = step.evaluation.loss;
    step.gradients = backward(net, tape, step.evaluation.grad_y);

    // d loss / d y_j for reference j of class c factors through the class
    // log density: d loss / d l_c = -P(c|y)(l_c - m_l), then the kernel
    // softmax within the class.
    const int L = ctx.num_classes();
    if (ctx.class_refs.size() != ref_rows.size())
        throw DataError("smig_training_gradients: ref_rows does not match context");
    const double mean_log_cond = step.evaluation.posterior.dot(step.evaluation.log_cond);

    Matrix grad_refs = Matrix::Zero(reference_tape.output.rows(), y.size());
    for (int c = 0; c < L; ++c) {
        const auto& refs = ctx.class_refs[static_cast<size_t>(c)];
        const auto& rows = ref_rows[static_cast<size_t>(c)];
        if (static_cast<Index>(rows.size()) != refs.rows())
            throw DataError("smig_training_gradients: ref_rows does not match context");
        const auto& h = ctx.bandwidths[static_cast<size_t>(c)];
        const double dl_dc = -step.evaluation.posterior[c] *
                             (step.evaluation.log_cond[c] - mean_log_cond);
        if (dl_dc == 0.0) continue;

        Vector logk(refs.rows());
        for (Index j = 0; j < refs.rows(); ++j)
            logk[j] = log_kernel(y - refs.row(j).transpose(), h);
        const double z = log_sum_exp(logk);
        for (Index j = 0; j < refs.rows(); ++j) {
            const double w_j = std::exp(logk[j] - z);
            grad_refs.row(rows[static_cast<size_t>(j)]) +=
                dl_dc * w_j *
                ((y - refs.row(j).transpose()).array() / h.array()).matrix().transpose();
        }
    }

    const Gradients ref_grads = batch_backward(net, reference_tape, grad_refs);
    for (size_t li = 0; li < step.gradients.weight.size(); ++li) {
        step.gradients.weight[li] += ref_grads.weight[li];
        step.gradients.bias[li] += ref_grads.bias[li];
    }
    return step;
}

}  // namespace mminet

#pragma once

#include <utility>

#include "mminet/density.hpp"
#include "mminet/network.hpp"
#include "mminet/types.hpp"

namespace mminet {

// Instantaneous mutual-information loss at a projected sample, together with
// its analytic gradient in the sample. Reference points, bandwidths and
// priors are treated as constants.
struct SmigEvaluation {
    double loss = 0.0;      // -I_t
    Vector grad_y;          // d loss / d y_t
    Vector log_joint;       // a_c = log P(c) + log p(y_t | c)
    Vector log_cond;        // log p(y_t | c)
    Vector posterior;       // softmax(a); P(c | y_t)
};

// Stable softmax-normalisation of a log-joint vector: returns logsumexp(a)
// and the posterior weights exp(a - logsumexp(a)).
std::pair<double, Vector> posterior_from_log_joint(const Eigen::Ref<const Vector>& a);

// loss = logsumexp(a) - sum_c P(c|y) log p(y|c), with every appearance of y
// (including inside the posterior weights) differentiated in grad_y.
SmigEvaluation instantaneous_loss(const Eigen::Ref<const Vector>& y,
                                  const KdeContext& ctx);

// One stochastic step: y = forward(net, x), instantaneous loss at y, and the
// loss gradient backpropagated to every network parameter.
struct SmigStep {
    double loss = 0.0;
    Gradients gradients;
    SmigEvaluation evaluation;
};

SmigStep smig_step_gradients(const ProjectionNetwork& net,
                             const Eigen::Ref<const Vector>& x, const KdeContext& ctx);

// Training-path step: the loss's dependence on the reference projections is
// backpropagated as well, so every reference sample pulls on the parameters.
// Bandwidths and priors stay fixed. reference_tape is the batch tape of the
// projections the context was built from; ref_rows[c] maps each reference
// row of class c back to its row in that tape.
SmigStep smig_training_gradients(const ProjectionNetwork& net,
                                 const Eigen::Ref<const Vector>& x_t,
                                 const KdeContext& ctx, const BatchTape& reference_tape,
                                 const std::vector<std::vector<Index>>& ref_rows);

}  // namespace mminet

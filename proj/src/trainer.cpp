#include "mminet/trainer.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <random>

#include "mminet/density.hpp"
#include "mminet/errors.hpp"
#include "mminet/smig.hpp"

namespace mminet {

void TrainConfig::validate(Index d_x) const {
    if (d_y < 1 || d_y > d_x)
        throw DataError("train config: d_y must be in [1, d_x]");
    if (epochs < 1) throw DataError("train config: epochs must be >= 1");
    // learning_rate 0 is allowed and leaves the network frozen
    if (!(learning_rate >= 0.0)) throw DataError("train config: learning_rate must be >= 0");
    if (!(momentum >= 0.0 && momentum < 1.0))
        throw DataError("train config: momentum must be in [0,1)");
    if (refresh_every < 1) throw DataError("train config: refresh_every must be >= 1");
}

KdeContext build_loo_context(const Matrix& projections,
                             const std::vector<std::vector<Index>>& by_class,
                             const Vector& priors, Index held_out, int held_out_class,
                             std::vector<std::vector<Index>>* ref_rows) {
    const int L = static_cast<int>(by_class.size());
    const Index d_y = projections.cols();
    std::vector<Matrix> refs(static_cast<size_t>(L));
    if (ref_rows) ref_rows->assign(static_cast<size_t>(L), {});
    for (int c = 0; c < L; ++c) {
        const auto& idx = by_class[static_cast<size_t>(c)];
        const Index m = static_cast<Index>(idx.size()) - (c == held_out_class ? 1 : 0);
        refs[static_cast<size_t>(c)].resize(m, d_y);
        Index r = 0;
        for (Index i : idx) {
            if (c == held_out_class && i == held_out) continue;
            if (ref_rows) (*ref_rows)[static_cast<size_t>(c)].push_back(i);
            refs[static_cast<size_t>(c)].row(r++) = projections.row(i);
        }
        assert(r == m);
    }
    return KdeContext::build(std::move(refs), priors);
}

TrainResult train_mminet(const Dataset& train, const TrainConfig& config) {
    train.validate();
    config.validate(train.dim());
    const auto by_class = train.class_indices();
    for (int c = 0; c < train.class_count; ++c)
        if (by_class[static_cast<size_t>(c)].size() < 3)
            throw DataError("train_mminet: class " + std::to_string(c) +
                            " has fewer than 3 samples");

    const auto t_start = std::chrono::steady_clock::now();
    const Index n = train.size();

    TrainResult result;
    result.network = build_network(train.dim(), config.d_y, config.arch, config.seed);
    OptimizerState opt =
        make_optimizer(result.network, config.learning_rate, config.momentum);

    Vector priors(train.class_count);
    for (int c = 0; c < train.class_count; ++c)
        priors[c] = static_cast<double>(by_class[static_cast<size_t>(c)].size()) /
                    static_cast<double>(n);

    std::mt19937_64 shuffle_rng(derive_seed(config.seed, 1));
    std::vector<Index> order(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;

    BatchTape reference_tape;
    std::vector<std::vector<Index>> ref_rows;
    std::uint64_t iteration = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (Index k = 0; k < n; ++k) {
            const Index t = order[static_cast<size_t>(k)];
            const int cls = train.labels[t];
            if (static_cast<Index>(by_class[static_cast<size_t>(cls)].size()) - 1 < 2) {
                ++result.report.skipped_samples;
                continue;
            }
            if (iteration % static_cast<std::uint64_t>(config.refresh_every) == 0)
                batch_forward(result.network, train.features, &reference_tape);
            ++iteration;

            const KdeContext ctx = build_loo_context(reference_tape.output, by_class,
                                                     priors, t, cls, &ref_rows);
            const SmigStep step =
                smig_training_gradients(result.network, train.features.row(t).transpose(),
                                        ctx, reference_tape, ref_rows);
            if (!std::isfinite(step.loss))
                throw NumericalError("train_mminet: non-finite loss at iteration " +
                                     std::to_string(iteration - 1));
            sgd_momentum_step(result.network, step.gradients, opt);
            result.report.loss_trace.push_back(step.loss);
        }
    }

    for (const auto& layer : result.network.layers) {
        result.report.final_weight_norm += layer.weight.squaredNorm();
        result.report.final_bias_norm += layer.bias.squaredNorm();
    }
    result.report.final_weight_norm = std::sqrt(result.report.final_weight_norm);
    result.report.final_bias_norm = std::sqrt(result.report.final_bias_norm);
    result.report.config = config;
    result.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

Matrix transform(const ProjectionNetwork& net, const Dataset& data) {
    return batch_forward(net, data.features);
}

std::string arch_name(Arch arch) {
    return arch == Arch::SingleLinear ? "single_linear" : "paper_default";
}

Arch arch_from_name(const std::string& name) {
    if (name == "single_linear") return Arch::SingleLinear;
    if (name == "paper_default") return Arch::PaperDefault;
    throw DataError("unknown architecture: " + name);
}

}  // namespace mminet

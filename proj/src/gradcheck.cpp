#include "mminet/gradcheck.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "mminet/density.hpp"
#include "mminet/network.hpp"
#include "mminet/smig.hpp"

namespace mminet {

namespace {

// Margin of |analytic - numeric| against atol + rtol*|numeric|; a check
// passes when every component stays <= 1.
double tolerance_ratio(double analytic, double numeric) {
    return std::abs(analytic - numeric) /
           (kGradCheckAtol + kGradCheckRtol * std::abs(numeric));
}

Matrix random_matrix(Index rows, Index cols, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, scale);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    return m;
}

Vector random_vector(Index size, double scale, std::mt19937_64& rng) {
    return random_matrix(size, 1, scale, rng);
}

KdeContext random_context(Index d_y, int L, std::mt19937_64& rng) {
    std::uniform_int_distribution<Index> ref_count(3, 8);
    std::uniform_real_distribution<double> uni(0.2, 1.0);
    std::vector<Matrix> refs;
    Vector priors(L);
    for (int c = 0; c < L; ++c) {
        refs.push_back(random_matrix(ref_count(rng), d_y, 1.5, rng));
        priors[c] = uni(rng);
    }
    priors /= priors.sum();
    return KdeContext::build(std::move(refs), priors);
}

// Runs fn over every trainable parameter slot of the network.
void for_each_parameter(ProjectionNetwork& net,
                        const std::function<void(double&, size_t, bool, Index, Index)>& fn) {
    for (size_t li = 0; li < net.layers.size(); ++li) {
        auto& layer = net.layers[li];
        for (Index i = 0; i < layer.weight.rows(); ++i)
            for (Index j = 0; j < layer.weight.cols(); ++j)
                fn(layer.weight(i, j), li, true, i, j);
        if (layer.has_bias)
            for (Index i = 0; i < layer.bias.size(); ++i)
                fn(layer.bias[i], li, false, i, 0);
    }
}

}  // namespace

GradCheckResult gradcheck_network(std::uint64_t seed, int instances) {
    GradCheckResult result{"network_backward", instances, 0.0, true};
    std::mt19937_64 rng(derive_seed(seed, 101));
    std::uniform_int_distribution<Index> dx_dist(4, 10);
    std::uniform_int_distribution<Index> dy_dist(1, 4);

    for (int it = 0; it < instances; ++it) {
        const Index d_x = dx_dist(rng);
        const Index d_y = std::min(dy_dist(rng), d_x);
        const Arch arch = it % 2 == 0 ? Arch::PaperDefault : Arch::SingleLinear;
        ProjectionNetwork net = build_network(d_x, d_y, arch, rng());
        const Vector x = random_vector(d_x, 1.0, rng);
        const Vector grad_y = random_vector(d_y, 1.0, rng);

        ForwardTape tape;
        forward(net, x, &tape);
        const Gradients analytic = backward(net, tape, grad_y);

        auto scalar = [&]() { return grad_y.dot(forward(net, x)); };
        for_each_parameter(net, [&](double& p, size_t li, bool is_weight, Index i, Index j) {
            const double saved = p;
            p = saved + kGradCheckStep;
            const double plus = scalar();
            p = saved - kGradCheckStep;
            const double minus = scalar();
            p = saved;
            const double numeric = (plus - minus) / (2.0 * kGradCheckStep);
            const double a = is_weight ? analytic.weight[li](i, j) : analytic.bias[li][i];
            result.max_rel_error = std::max(result.max_rel_error, tolerance_ratio(a, numeric));
        });
    }
    result.passed = result.max_rel_error <= 1.0;
    return result;
}

GradCheckResult gradcheck_density(std::uint64_t seed, int instances) {
    GradCheckResult result{"density_gradient", instances, 0.0, true};
    std::mt19937_64 rng(derive_seed(seed, 202));
    std::uniform_int_distribution<Index> dy_dist(1, 3);
    std::uniform_int_distribution<int> L_dist(2, 3);

    for (int it = 0; it < instances; ++it) {
        const Index d_y = dy_dist(rng);
        const int L = L_dist(rng);
        const KdeContext ctx = random_context(d_y, L, rng);
        Vector y = random_vector(d_y, 1.5, rng);
        const int c = std::uniform_int_distribution<int>(0, L - 1)(rng);

        const Vector analytic = grad_log_class_density(y, ctx, c);
        for (Index i = 0; i < d_y; ++i) {
            const double saved = y[i];
            y[i] = saved + kGradCheckStep;
            const double plus = log_class_density(y, ctx, c);
            y[i] = saved - kGradCheckStep;
            const double minus = log_class_density(y, ctx, c);
            y[i] = saved;
            const double numeric = (plus - minus) / (2.0 * kGradCheckStep);
            result.max_rel_error =
                std::max(result.max_rel_error, tolerance_ratio(analytic[i], numeric));
        }
    }
    result.passed = result.max_rel_error <= 1.0;
    return result;
}

GradCheckResult gradcheck_loss(std::uint64_t seed, int instances) {
    GradCheckResult result{"instantaneous_loss_gradient", instances, 0.0, true};
    std::mt19937_64 rng(derive_seed(seed, 303));
    constexpr Index dys[] = {1, 2, 3};
    constexpr int Ls[] = {2, 3, 5};

    for (int it = 0; it < instances; ++it) {
        const Index d_y = dys[it % 3];
        const int L = Ls[(it / 3) % 3];
        const KdeContext ctx = random_context(d_y, L, rng);
        Vector y = random_vector(d_y, 1.5, rng);

        const SmigEvaluation ev = instantaneous_loss(y, ctx);
        for (Index i = 0; i < d_y; ++i) {
            const double saved = y[i];
            y[i] = saved + kGradCheckStep;
            const double plus = instantaneous_loss(y, ctx).loss;
            y[i] = saved - kGradCheckStep;
            const double minus = instantaneous_loss(y, ctx).loss;
            y[i] = saved;
            const double numeric = (plus - minus) / (2.0 * kGradCheckStep);
            result.max_rel_error =
                std::max(result.max_rel_error, tolerance_ratio(ev.grad_y[i], numeric));
        }
    }
    result.passed = result.max_rel_error <= 1.0;
    return result;
}

GradCheckResult gradcheck_smig_params(std::uint64_t seed, int instances) {
    GradCheckResult result{"smig_parameter_gradient", instances, 0.0, true};
    std::mt19937_64 rng(derive_seed(seed, 404));
    std::uniform_int_distribution<Index> dx_dist(4, 8);
    std::uniform_int_distribution<Index> dy_dist(1, 2);

    for (int it = 0; it < instances; ++it) {
        const Index d_x = dx_dist(rng);
        const Index d_y = dy_dist(rng);
        const Arch arch = it % 2 == 0 ? Arch::PaperDefault : Arch::SingleLinear;
        ProjectionNetwork net = build_network(d_x, d_y, arch, rng());

        // Reference set projected through the current network, then frozen.
        const int L = std::uniform_int_distribution<int>(2, 3)(rng);
        std::vector<Matrix> refs;
        Vector priors(L);
        for (int c = 0; c < L; ++c) {
            const Index m = std::uniform_int_distribution<Index>(4, 8)(rng);
            refs.push_back(batch_forward(net, random_matrix(m, d_x, 1.0, rng)));
            priors[c] = 1.0;
        }
        priors /= priors.sum();
        const KdeContext ctx = KdeContext::build(std::move(refs), priors);
        const Vector x = random_vector(d_x, 1.0, rng);

        const SmigStep step = smig_step_gradients(net, x, ctx);
        auto loss_at = [&]() { return instantaneous_loss(forward(net, x), ctx).loss; };
        for_each_parameter(net, [&](double& p, size_t li, bool is_weight, Index i, Index j) {
            const double saved = p;
            p = saved + kGradCheckStep;
            const double plus = loss_at();
            p = saved - kGradCheckStep;
            const double minus = loss_at();
            p = saved;
            const double numeric = (plus - minus) / (2.0 * kGradCheckStep);
            const double a =
                is_weight ? step.gradients.weight[li](i, j) : step.gradients.bias[li][i];
            result.max_rel_error = std::max(result.max_rel_error, tolerance_ratio(a, numeric));
        });
    }
    result.passed = result.max_rel_error <= 1.0;
    return result;
}

std::vector<GradCheckResult> run_all_gradchecks(std::uint64_t seed) {
    return {gradcheck_network(seed), gradcheck_density(seed), gradcheck_loss(seed),
            gradcheck_smig_params(seed)};
}

}  // namespace mminet

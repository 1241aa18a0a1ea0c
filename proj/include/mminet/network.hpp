#pragma once

#include <cstdint>
#include <vector>

#include "mminet/types.hpp"

namespace mminet {

enum class Activation { Elu, Identity };
enum class Arch { PaperDefault, SingleLinear };

// ELU with alpha = 1 and its derivative in the pre-activation.
inline double elu(double z) { return z > 0.0 ? z : std::expm1(z); }
inline double elu_grad(double z) { return z > 0.0 ? 1.0 : std::exp(z); }

struct DenseLayer {
    Matrix weight;   // out x in
    Vector bias;     // out; all zeros when has_bias is false
    bool has_bias = true;
    Activation activation = Activation::Identity;
};

// Feed-forward projection y = phi(x; theta): a chain of dense layers with ELU
// after each hidden layer and an identity output layer.
struct ProjectionNetwork {
    std::vector<DenseLayer> layers;

    Index input_dim() const { return layers.front().weight.cols(); }
    Index output_dim() const { return layers.back().weight.rows(); }
    bool all_finite() const;
};

// PaperDefault: d_x -> max(floor(d_x/2), d_y) -> max(floor(d_x/4), d_y) -> d_y
// with ELU on both hidden layers. SingleLinear: one bias-free d_x -> d_y map.
// Weights are uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] by seed, biases 0.
ProjectionNetwork build_network(Index d_x, Index d_y, Arch arch, std::uint64_t seed);

// Per-layer inputs and pre-activations captured by forward for backward.
struct ForwardTape {
    std::vector<Vector> inputs;    // input to each layer
    std::vector<Vector> preacts;   // W*in + b per layer
    Vector output;
};

Vector forward(const ProjectionNetwork& net, const Eigen::Ref<const Vector>& x,
               ForwardTape* tape = nullptr);

// Row-wise tape for a whole batch; feeds batch_backward.
struct BatchTape {
    std::vector<Matrix> inputs;    // per layer, n x in
    std::vector<Matrix> preacts;   // per layer, n x out
    Matrix output;                 // n x d_y
};

// All rows of X pushed through the network at once (same math as forward,
// evaluated with matrix products).
Matrix batch_forward(const ProjectionNetwork& net, const Eigen::Ref<const Matrix>& X,
                     BatchTape* tape = nullptr);

struct Gradients {
    std::vector<Matrix> weight;
    std::vector<Vector> bias;

    bool all_finite() const;
    static Gradients zeros_like(const ProjectionNetwork& net);
};

// Exact gradients of <grad_y, forward(x)> with respect to every parameter.
Gradients backward(const ProjectionNetwork& net, const ForwardTape& tape,
                   const Eigen::Ref<const Vector>& grad_y);

// Parameter gradients of sum_i <grad_Y.row(i), batch_forward(X).row(i)>;
// one pass of matrix products over the whole batch.
Gradients batch_backward(const ProjectionNetwork& net, const BatchTape& tape,
                         const Eigen::Ref<const Matrix>& grad_Y);

// Classical momentum buffers: v <- beta*v + g; theta <- theta - eta*v.
struct OptimizerState {
    std::vector<Matrix> velocity_weight;
    std::vector<Vector> velocity_bias;
    double learning_rate = 0.01;
    double momentum = 0.9;
};

OptimizerState make_optimizer(const ProjectionNetwork& net, double learning_rate,
                              double momentum);

void sgd_momentum_step(ProjectionNetwork& net, const Gradients& grads,
                       OptimizerState& state);

}  // namespace mminet

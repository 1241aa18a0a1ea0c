#include "mminet/network.hpp"

#include <random>

#include "mminet/errors.hpp"

namespace mminet {

bool ProjectionNetwork::all_finite() const {
    for (const auto& layer : layers)
        if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
    return true;
}

namespace {

DenseLayer make_layer(Index out, Index in, bool has_bias, Activation act,
                      std::mt19937_64& rng) {
    DenseLayer layer;
    const double lim = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> uni(-lim, lim);
    layer.weight.resize(out, in);
    for (Index i = 0; i < out; ++i)
        for (Index j = 0; j < in; ++j) layer.weight(i, j) = uni(rng);
    layer.bias = Vector::Zero(out);
    layer.has_bias = has_bias;
    layer.activation = act;
    return layer;
}

}  // namespace

ProjectionNetwork build_network(Index d_x, Index d_y, Arch arch, std::uint64_t seed) {
    if (d_y < 1) throw DataError("build_network: d_y must be >= 1");
    if (d_x < 1) throw DataError("build_network: d_x must be >= 1");

    std::mt19937_64 rng(seed);
    ProjectionNetwork net;
    if (arch == Arch::SingleLinear) {
        net.layers.push_back(make_layer(d_y, d_x, false, Activation::Identity, rng));
        return net;
    }

    if (d_x < 4) throw DataError("build_network: paper_default arch requires d_x >= 4");
    // Hidden widths are floored at d_y so the chain never narrows below the
    // output dimensionality.
    const Index h1 = std::max(d_x / 2, d_y);
    const Index h2 = std::max(d_x / 4, d_y);
    net.layers.push_back(make_layer(h1, d_x, true, Activation::Elu, rng));
    net.layers.push_back(make_layer(h2, h1, true, Activation::Elu, rng));
    net.layers.push_back(make_layer(d_y, h2, true, Activation::Identity, rng));
    return net;
}

Vector forward(const ProjectionNetwork& net, const Eigen::Ref<const Vector>& x,
               ForwardTape* tape) {
    if (x.size() != net.input_dim())
        throw DataError("forward: input has dimension " + std::to_string(x.size()) +
                        ", network expects " + std::to_string(net.input_dim()));
    if (tape) {
        tape->inputs.clear();
        tape->preacts.clear();
    }
    Vector a = x;
    for (const auto& layer : net.layers) {
        if (tape) tape->inputs.push_back(a);
        Vector z = layer.weight * a;
        if (layer.has_bias) z += layer.bias;
        if (tape) tape->preacts.push_back(z);
        if (layer.activation == Activation::Elu)
            a = z.unaryExpr([](double v) { return elu(v); });
        else
            a = std::move(z);
    }
    if (tape) tape->output = a;
    return a;
}

Matrix batch_forward(const ProjectionNetwork& net, const Eigen::Ref<const Matrix>& X,
                     BatchTape* tape) {
    if (X.cols() != net.input_dim())
        throw DataError("batch_forward: input has " + std::to_string(X.cols()) +
                        " columns, network expects " + std::to_string(net.input_dim()));
    if (tape) {
        tape->inputs.clear();
        tape->preacts.clear();
    }
    Matrix a = X;
    for (const auto& layer : net.layers) {
        if (tape) tape->inputs.push_back(a);
        Matrix z = a * layer.weight.transpose();
        if (layer.has_bias) z.rowwise() += layer.bias.transpose();
        if (tape) tape->preacts.push_back(z);
        if (layer.activation == Activation::Elu)
            a = z.unaryExpr([](double v) { return elu(v); });
        else
            a = std::move(z);
    }
    if (tape) tape->output = a;
    return a;
}

Gradients batch_backward(const ProjectionNetwork& net, const BatchTape& tape,
                         const Eigen::Ref<const Matrix>& grad_Y) {
    const size_t n_layers = net.layers.size();
    if (tape.inputs.size() != n_layers || tape.preacts.size() != n_layers)
        throw DataError("batch_backward: tape does not match network");
    if (grad_Y.cols() != net.output_dim() || grad_Y.rows() != tape.inputs.front().rows())
        throw DataError("batch_backward: grad_Y shape mismatch");

    Gradients grads;
    grads.weight.resize(n_layers);
    grads.bias.resize(n_layers);

    Matrix delta = grad_Y;
    for (size_t li = n_layers; li-- > 0;) {
        const auto& layer = net.layers[li];
        Matrix dz;
        if (layer.activation == Activation::Elu)
            dz = delta.cwiseProduct(
                tape.preacts[li].unaryExpr([](double v) { return elu_grad(v); }));
        else
            dz = std::move(delta);
        grads.weight[li] = dz.transpose() * tape.inputs[li];
        grads.bias[li] = layer.has_bias ? Vector(dz.colwise().sum().transpose())
                                        : Vector::Zero(layer.bias.size());
        if (li > 0) delta = dz * layer.weight;
    }
    return grads;
}

bool Gradients::all_finite() const {
    for (const auto& g : weight)
        if (!g.allFinite()) return false;
    for (const auto& g : bias)
        if (!g.allFinite()) return false;
    return true;
}

Gradients Gradients::zeros_like(const ProjectionNetwork& net) {
    Gradients g;
    for (const auto& layer : net.layers) {
        g.weight.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
        g.bias.push_back(Vector::Zero(layer.bias.size()));
    }
    return g;
}

Gradients backward(const ProjectionNetwork& net, const ForwardTape& tape,
                   const Eigen::Ref<const Vector>& grad_y) {
    const size_t n_layers = net.layers.size();
    if (tape.inputs.size() != n_layers || tape.preacts.size() != n_layers)
        throw DataError("backward: tape does not match network");
    if (grad_y.size() != net.output_dim())
        throw DataError("backward: grad_y has dimension " + std::to_string(grad_y.size()) +
                        ", network output is " + std::to_string(net.output_dim()));

    Gradients grads;
    grads.weight.resize(n_layers);
    grads.bias.resize(n_layers);

    Vector delta = grad_y;  // d<grad_y, y> / d(layer output)
    for (size_t li = n_layers; li-- > 0;) {
        const auto& layer = net.layers[li];
        Vector dz;
        if (layer.activation == Activation::Elu)
            dz = delta.cwiseProduct(
                tape.preacts[li].unaryExpr([](double v) { return elu_grad(v); }));
        else
            dz = delta;
        grads.weight[li] = dz * tape.inputs[li].transpose();
        grads.bias[li] = layer.has_bias ? dz : Vector::Zero(layer.bias.size());
        if (li > 0) delta = layer.weight.transpose() * dz;
    }
    return grads;
}

OptimizerState make_optimizer(const ProjectionNetwork& net, double learning_rate,
                              double momentum) {
    if (!(learning_rate >= 0.0)) throw DataError("learning_rate must be >= 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw DataError("momentum must be in [0,1)");
    OptimizerState state;
    state.learning_rate = learning_rate;
    state.momentum = momentum;
    for (const auto& layer : net.layers) {
        state.velocity_weight.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
        state.velocity_bias.push_back(Vector::Zero(layer.bias.size()));
    }
    return state;
}

void sgd_momentum_step(ProjectionNetwork& net, const Gradients& grads,
                       OptimizerState& state) {
    if (grads.weight.size() != net.layers.size())
        throw DataError("sgd_momentum_step: gradient shape mismatch");
    if (!grads.all_finite())
        throw NumericalError("sgd_momentum_step: non-finite gradient");
    for (size_t li = 0; li < net.layers.size(); ++li) {
        auto& layer = net.layers[li];
        auto& vw = state.velocity_weight[li];
        auto& vb = state.velocity_bias[li];
        vw = state.momentum * vw + grads.weight[li];
        layer.weight -= state.learning_rate * vw;
        if (layer.has_bias) {
            vb = state.momentum * vb + grads.bias[li];
            layer.bias -= state.learning_rate * vb;
        }
    }
    if (!net.all_finite())
        throw NumericalError("sgd_momentum_step: parameters became non-finite");
}

}  // namespace mminet

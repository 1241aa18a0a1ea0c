#include "mminet/svm.hpp"

#include <algorithm>
#include <random>

#include "mminet/errors.hpp"

namespace mminet {

BinarySvm svm_train(const Eigen::Ref<const Matrix>& X,
                    const Eigen::Ref<const Vector>& labels, const SvmParams& params,
                    std::uint64_t seed) {
    const Index n = X.rows();
    const Index d = X.cols();
    if (labels.size() != n) throw DataError("svm_train: label count mismatch");
    if (!(params.lambda > 0.0)) throw DataError("svm_train: lambda must be > 0");
    bool has_pos = false, has_neg = false;
    for (Index i = 0; i < n; ++i) {
        if (labels[i] > 0) has_pos = true;
        else has_neg = true;
    }
    if (!has_pos || !has_neg)
        throw DataError("svm_train: both label signs must be present");

    Vector w = Vector::Zero(d);
    double b = 0.0;
    Vector w_avg = Vector::Zero(d);
    double b_avg = 0.0;

    // Pegasos-style updates with the projection onto the 1/sqrt(lambda) ball.
    // The schedule is shifted by t0 = 1/lambda so the first steps stay O(1);
    // the raw 1/(lambda*t) start (a 1/lambda kick on the unregularized bias)
    // wrecks the averaged iterate for small lambda.
    const double radius = 1.0 / std::sqrt(params.lambda);
    const double t0 = 1.0 / params.lambda;
    std::mt19937_64 rng(seed);
    std::vector<Index> order(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;

    std::uint64_t t = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (Index k = 0; k < n; ++k) {
            const Index i = order[static_cast<size_t>(k)];
            ++t;
            const double eta = 1.0 / (params.lambda * (static_cast<double>(t) + t0));
            const double y = labels[i];
            const bool violated = y * (w.dot(X.row(i).transpose()) + b) < 1.0;
            w *= 1.0 - eta * params.lambda;
            if (violated) {
                w += (eta * y) * X.row(i).transpose();
                b += eta * y;
            }
            const double norm = w.norm();
            if (norm > radius) w *= radius / norm;

            const double inv_t = 1.0 / static_cast<double>(t);
            w_avg += inv_t * (w - w_avg);
            b_avg += inv_t * (b - b_avg);
        }
    }

    BinarySvm model;
    model.weight = std::move(w_avg);
    model.bias = b_avg;
    if (!model.weight.allFinite() || !std::isfinite(model.bias))
        throw NumericalError("svm_train: non-finite model");
    return model;
}

double svm_objective(const Eigen::Ref<const Matrix>& X,
                     const Eigen::Ref<const Vector>& labels, const BinarySvm& model,
                     double lambda) {
    const Index n = X.rows();
    double hinge = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double margin = labels[i] * model.score(X.row(i).transpose());
        hinge += std::max(0.0, 1.0 - margin);
    }
    return 0.5 * lambda * model.weight.squaredNorm() + hinge / static_cast<double>(n);
}

LinearSvmModel train_linear_svm(const Eigen::Ref<const Matrix>& X,
                                const IntVector& labels, int class_count,
                                const SvmParams& params, std::uint64_t seed) {
    if (class_count < 2) throw DataError("train_linear_svm: need at least 2 classes");
    LinearSvmModel model;
    model.class_count = class_count;
    const Index n = X.rows();
    Vector signed_labels(n);
    if (class_count == 2) {
        for (Index i = 0; i < n; ++i) signed_labels[i] = labels[i] == 1 ? 1.0 : -1.0;
        model.models.push_back(svm_train(X, signed_labels, params, seed));
    } else {
        for (int c = 0; c < class_count; ++c) {
            for (Index i = 0; i < n; ++i)
                signed_labels[i] = labels[i] == c ? 1.0 : -1.0;
            model.models.push_back(svm_train(X, signed_labels, params,
                                             derive_seed(seed, static_cast<std::uint64_t>(c))));
        }
    }
    return model;
}

int svm_predict(const LinearSvmModel& model, const Eigen::Ref<const Vector>& x) {
    if (model.class_count == 2)
        return model.models.front().score(x) > 0.0 ? 1 : 0;
    int best = 0;
    double best_score = model.models.front().score(x);
    for (int c = 1; c < model.class_count; ++c) {
        const double s = model.models[static_cast<size_t>(c)].score(x);
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    return best;
}

double accuracy(const LinearSvmModel& model, const Eigen::Ref<const Matrix>& X,
                const IntVector& labels) {
    if (X.rows() != labels.size()) throw DataError("accuracy: label count mismatch");
    Index correct = 0;
    for (Index i = 0; i < X.rows(); ++i)
        if (svm_predict(model, X.row(i).transpose()) == labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(X.rows());
}

}  // namespace mminet

#pragma once

#include <cstdint>
#include <vector>

#include "mminet/dataset.hpp"
#include "mminet/types.hpp"

namespace mminet {

struct SvmParams {
    double lambda = 1e-3;  // l2 regularization strength
    int epochs = 20;       // full passes over the training set
};

// Primal stochastic subgradient descent on (lambda/2)||w||^2 + mean hinge
// loss with step 1/(lambda*t) and an unregularized bias. The averaged
// iterate over all steps is returned.
struct BinarySvm {
    Vector weight;
    double bias = 0.0;

    double score(const Eigen::Ref<const Vector>& x) const {
        return weight.dot(x) + bias;
    }
};

// labels must be +1/-1 and both present.
BinarySvm svm_train(const Eigen::Ref<const Matrix>& X,
                    const Eigen::Ref<const Vector>& labels, const SvmParams& params,
                    std::uint64_t seed);

// Regularized hinge objective of a given (w, b); used by tests and RFE.
double svm_objective(const Eigen::Ref<const Matrix>& X,
                     const Eigen::Ref<const Vector>& labels, const BinarySvm& model,
                     double lambda);

// One binary model for L = 2, otherwise one-vs-rest with L models.
struct LinearSvmModel {
    std::vector<BinarySvm> models;
    int class_count = 0;

    bool one_vs_rest() const { return class_count > 2; }
};

LinearSvmModel train_linear_svm(const Eigen::Ref<const Matrix>& X,
                                const IntVector& labels, int class_count,
                                const SvmParams& params, std::uint64_t seed);

// Binary: sign of the score (0 on ties picks the lower class index).
// Multiclass: argmax over one-vs-rest scores, ties to the lower index.
int svm_predict(const LinearSvmModel& model, const Eigen::Ref<const Vector>& x);

double accuracy(const LinearSvmModel& model, const Eigen::Ref<const Matrix>& X,
                const IntVector& labels);

}  // namespace mminet

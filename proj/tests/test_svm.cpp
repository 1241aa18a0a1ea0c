#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mminet/dataset.hpp"
#include "mminet/errors.hpp"
#include "mminet/svm.hpp"

using namespace mminet;

TEST_CASE("separable 1-D data is classified perfectly") {
    Matrix X(4, 1);
    X << -2.0, -1.0, 1.0, 2.0;
    Vector y(4);
    y << -1.0, -1.0, 1.0, 1.0;
    SvmParams params;
    params.lambda = 1e-3;
    const BinarySvm model = svm_train(X, y, params, 1);
    for (Index i = 0; i < 4; ++i)
        CHECK(model.score(X.row(i).transpose()) * y[i] > 0.0);
}

TEST_CASE("objective is near the best of 50 restarts") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix X(20, 3);
    Vector y(20);
    for (Index i = 0; i < 20; ++i) {
        const double cls = i < 10 ? -1.0 : 1.0;
        for (Index j = 0; j < 3; ++j) X(i, j) = gauss(rng) + (j == 0 ? cls * 1.5 : 0.0);
        y[i] = cls;
    }
    SvmParams params;
    params.epochs = 200;  // run to convergence so restart spread is tight
    const BinarySvm ours = svm_train(X, y, params, 0);
    const double our_obj = svm_objective(X, y, ours, params.lambda);
    double best = our_obj;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const BinarySvm restart = svm_train(X, y, params, seed);
        best = std::min(best, svm_objective(X, y, restart, params.lambda));
    }
    CHECK(our_obj <= best * 1.02);
}

TEST_CASE("huge regularization shrinks the weights") {
    Matrix X(10, 2);
    Vector y(10);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index i = 0; i < 10; ++i) {
        y[i] = i % 2 == 0 ? 1.0 : -1.0;
        for (Index j = 0; j < 2; ++j) X(i, j) = gauss(rng) + y[i];
    }
    SvmParams params;
    params.lambda = 1e6;
    const BinarySvm model = svm_train(X, y, params, 0);
    CHECK(model.weight.norm() < 1e-2);
}

TEST_CASE("training is deterministic given the seed") {
    Matrix X = Matrix::Random(30, 4);
    Vector y(30);
    for (Index i = 0; i < 30; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;
    SvmParams params;
    const BinarySvm a = svm_train(X, y, params, 9);
    const BinarySvm b = svm_train(X, y, params, 9);
    CHECK(a.weight == b.weight);
    CHECK(a.bias == b.bias);
}

TEST_CASE("single-label input is rejected") {
    Matrix X = Matrix::Random(5, 2);
    Vector y = Vector::Ones(5);
    CHECK_THROWS_AS(svm_train(X, y, SvmParams{}, 0), DataError);
}

TEST_CASE("all-zero binary model ties to class 0") {
    LinearSvmModel model;
    model.class_count = 2;
    BinarySvm zero;
    zero.weight = Vector::Zero(3);
    model.models.push_back(zero);
    CHECK(svm_predict(model, Vector::Random(3)) == 0);
}

TEST_CASE("multiclass argmax ties break toward the lower index") {
    LinearSvmModel model;
    model.class_count = 3;
    for (int c = 0; c < 3; ++c) {
        BinarySvm m;
        m.weight = Vector::Zero(2);
        m.bias = c == 2 ? -1.0 : 0.0;  // classes 0 and 1 tie at score 0
        model.models.push_back(m);
    }
    CHECK(svm_predict(model, Vector::Random(2)) == 0);
}

TEST_CASE("prediction is invariant to shared positive scaling") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    LinearSvmModel model, scaled;
    model.class_count = scaled.class_count = 4;
    for (int c = 0; c < 4; ++c) {
        BinarySvm m;
        m.weight = Vector::Random(3);
        m.bias = gauss(rng);
        model.models.push_back(m);
        BinarySvm s = m;
        s.weight *= 12.5;
        s.bias *= 12.5;
        scaled.models.push_back(s);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x = Vector::Random(3);
        CHECK(svm_predict(model, x) == svm_predict(scaled, x));
    }
}

TEST_CASE("perfect model reaches accuracy one on its training toy") {
    Matrix X(6, 1);
    X << -3.0, -2.0, -1.0, 1.0, 2.0, 3.0;
    IntVector labels(6);
    labels << 0, 0, 0, 1, 1, 1;
    const LinearSvmModel model = train_linear_svm(X, labels, 2, SvmParams{}, 0);
    CHECK(accuracy(model, X, labels) == doctest::Approx(1.0));
}

TEST_CASE("random guessing on balanced classes sits near 1/L") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int L = 4;
    const Index n = 500;
    Matrix X(n, 3);
    IntVector labels(n);
    for (Index i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(i) % L;  // balanced
        for (Index j = 0; j < 3; ++j) X(i, j) = gauss(rng);  // labels independent of X
    }
    LinearSvmModel model;
    model.class_count = L;
    for (int c = 0; c < L; ++c) {
        BinarySvm m;
        m.weight = Vector::Random(3);
        m.bias = gauss(rng);
        model.models.push_back(m);
    }
    const double acc = accuracy(model, X, labels);
    CHECK(acc == doctest::Approx(1.0 / L).epsilon(0.4));  // 0.25 +- 0.1
    CHECK(std::abs(acc - 0.25) <= 0.1);
}

TEST_CASE("one-vs-rest separates three linear clusters") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss(0.0, 0.3);
    const Index n = 90;
    Matrix X(n, 2);
    IntVector labels(n);
    const double centers[3][2] = {{0.0, 2.0}, {2.0, -1.0}, {-2.0, -1.0}};
    for (Index i = 0; i < n; ++i) {
        const int c = static_cast<int>(i) % 3;
        labels[i] = c;
        X(i, 0) = centers[c][0] + gauss(rng);
        X(i, 1) = centers[c][1] + gauss(rng);
    }
    const LinearSvmModel model = train_linear_svm(X, labels, 3, SvmParams{}, 4);
    CHECK(model.models.size() == 3);
    CHECK(accuracy(model, X, labels) >= 0.95);
}

TEST_CASE("toy 2-D data projected onto its discriminative axis") {
    const Dataset toy = gen_toy2d(200, 17);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Matrix projected(toy.size(), 1);
    for (Index i = 0; i < toy.size(); ++i)
        projected(i, 0) =
            toy.features(i, 0) * inv_sqrt2 - toy.features(i, 1) * inv_sqrt2;
    const LinearSvmModel model = train_linear_svm(projected, toy.labels, 2, SvmParams{}, 8);
    CHECK(accuracy(model, projected, toy.labels) >= 0.97);
}

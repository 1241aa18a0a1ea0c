#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mminet/density.hpp"
#include "mminet/errors.hpp"
#include "mminet/gradcheck.hpp"

using namespace mminet;

namespace {

KdeContext two_class_context(const Matrix& refs0, const Matrix& refs1) {
    Vector priors(2);
    priors << 0.5, 0.5;
    return KdeContext::build({refs0, refs1}, priors);
}

}  // namespace

TEST_CASE("silverman bandwidth matches the rule of thumb") {
    // 100 points with sample std exactly 1 in one dimension
    Matrix points(100, 1);
    for (Index i = 0; i < 100; ++i) points(i, 0) = static_cast<double>(i);
    const double mean = points.col(0).mean();
    const double sd = std::sqrt((points.col(0).array() - mean).square().sum() / 99.0);
    points /= sd;  // sample std (m-1 denominator) is now exactly 1

    const Vector h = silverman_bandwidth(points);
    const double expected_h = std::pow(4.0 / 300.0, 0.2);
    CHECK(expected_h == doctest::Approx(0.4217).epsilon(1e-3));
    CHECK(h[0] == doctest::Approx(expected_h * expected_h).epsilon(1e-9));
    CHECK(h[0] == doctest::Approx(0.1778).epsilon(1e-3));
}

TEST_CASE("degenerate spread floors the bandwidth") {
    Matrix points = Matrix::Constant(5, 2, 3.25);
    const Vector h = silverman_bandwidth(points);
    CHECK(h[0] == doctest::Approx(1e-12).epsilon(1e-9));  // (1e-6)^2
    CHECK(h[1] == doctest::Approx(1e-12).epsilon(1e-9));
}

TEST_CASE("bandwidth scales linearly with the data") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 2.0);
    Matrix points(30, 3);
    for (Index i = 0; i < 30; ++i)
        for (Index j = 0; j < 3; ++j) points(i, j) = gauss(rng);
    const Vector h1 = silverman_bandwidth(points);
    const double lambda = 3.7;
    const Vector h2 = silverman_bandwidth(points * lambda);
    // h scales by lambda, the stored diagonal holds h^2
    CHECK((h2 - h1 * lambda * lambda).cwiseAbs().maxCoeff() < 1e-12 * h2.maxCoeff());
    CHECK_THROWS_AS(silverman_bandwidth(Matrix::Random(1, 2)), DataError);
}

TEST_CASE("log_kernel closed-form values") {
    Vector u0 = Vector::Zero(1), h1 = Vector::Ones(1);
    CHECK(log_kernel(u0, h1) == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi))
                                    .epsilon(1e-12));
    Vector u2(2), h2 = Vector::Ones(2);
    u2 << 1.0, 1.0;
    CHECK(log_kernel(u2, h2) ==
          doctest::Approx(-std::log(2.0 * std::numbers::pi) - 1.0).epsilon(1e-12));
}

TEST_CASE("log_kernel decreases along any ray") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Vector dir(3), h(3);
        for (Index i = 0; i < 3; ++i) {
            dir[i] = gauss(rng);
            h[i] = 0.2 + std::abs(gauss(rng));
        }
        double prev = log_kernel(Vector::Zero(3), h);
        for (double t = 0.5; t < 5.0; t += 0.5) {
            const double v = log_kernel((t * dir).eval(), h);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("log_class_density closed forms") {
    // two identical refs at the query: density equals the kernel peak
    Matrix refs0(2, 1);
    refs0 << 0.0, 0.0;
    Matrix refs1(2, 1);
    refs1 << 5.0, 6.0;
    auto ctx = two_class_context(refs0, refs1);
    // force unit bandwidth for the closed-form check
    ctx.bandwidths[0] = Vector::Ones(1);
    Vector y = Vector::Zero(1);
    CHECK(log_class_density(y, ctx, 0) ==
          doctest::Approx(std::log(1.0 / std::sqrt(2.0 * std::numbers::pi))).epsilon(1e-12));

    // refs {-1, +1} at y = 0: both kernels contribute e^{-1/2}
    Matrix refs(2, 1);
    refs << -1.0, 1.0;
    auto ctx2 = two_class_context(refs, refs1);
    ctx2.bandwidths[0] = Vector::Ones(1);
    CHECK(log_class_density(y, ctx2, 0) ==
          doctest::Approx(std::log(std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)))
              .epsilon(1e-12));
}

TEST_CASE("far queries stay finite") {
    Matrix refs(3, 2);
    refs << 0.0, 0.0, 0.1, -0.1, -0.2, 0.2;
    Matrix other = refs.array() + 1.0;
    const auto ctx = two_class_context(refs, other);
    Vector y(2);
    const double h = std::sqrt(ctx.bandwidths[0][0]);
    y << 100.0 * h, 100.0 * h;
    const double v = log_class_density(y, ctx, 0);
    CHECK(std::isfinite(v));
    CHECK(v < -100.0);
    const Vector g = grad_log_class_density(y, ctx, 0);
    CHECK(g.allFinite());
}

TEST_CASE("density gradient matches finite differences") {
    const auto result = gradcheck_density(777, 24);
    INFO("worst tolerance ratio ", result.max_rel_error);
    CHECK(result.passed);
}

TEST_CASE("gradient vanishes at the centroid of a symmetric reference set") {
    Matrix refs(4, 2);
    refs << 1.0, 0.5, -1.0, -0.5, 0.7, -1.2, -0.7, 1.2;  // point-symmetric about 0
    Matrix other = refs.array() + 3.0;
    const auto ctx = two_class_context(refs, other);
    const Vector g = grad_log_class_density(Vector::Zero(2), ctx, 0);
    CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coincident references give the single-Gaussian gradient") {
    Matrix refs(3, 2);
    Vector r(2);
    r << 0.8, -0.4;
    for (Index i = 0; i < 3; ++i) refs.row(i) = r.transpose();
    Matrix other(2, 2);
    other << 5.0, 5.0, 6.0, 6.0;
    auto ctx = two_class_context(refs, other);
    ctx.bandwidths[0] << 0.25, 4.0;  // nontrivial diagonal
    Vector y(2);
    y << -1.0, 2.0;
    const Vector g = grad_log_class_density(y, ctx, 0);
    const Vector expected = ((r - y).array() / ctx.bandwidths[0].array()).matrix();
    CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gradient equals the explicit softmax combination") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix refs(5, 2);
        for (Index i = 0; i < 5; ++i)
            for (Index j = 0; j < 2; ++j) refs(i, j) = gauss(rng);
        Matrix other = refs.array() + 2.0;
        const auto ctx = two_class_context(refs, other);
        Vector y(2);
        y << gauss(rng), gauss(rng);

        // spec form: w_j = softmax(log kernels), grad = sum w_j H^-1 (y_j - y)
        Vector logk(5);
        for (Index j = 0; j < 5; ++j)
            logk[j] = log_kernel(y - refs.row(j).transpose(), ctx.bandwidths[0]);
        const double z = log_sum_exp(logk);
        Vector w = (logk.array() - z).exp();
        CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.minCoeff() >= 0.0);
        Vector expected = Vector::Zero(2);
        for (Index j = 0; j < 5; ++j)
            expected += w[j] *
                        ((refs.row(j).transpose() - y).array() / ctx.bandwidths[0].array())
                            .matrix();
        const Vector g = grad_log_class_density(y, ctx, 0);
        CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("permutation and translation invariance") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.5);
    Matrix refs(6, 2);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 2; ++j) refs(i, j) = gauss(rng);
    Matrix other = refs.array() - 4.0;
    const auto ctx = two_class_context(refs, other);
    Vector y(2);
    y << 0.3, -0.9;
    const double base = log_class_density(y, ctx, 0);

    Matrix permuted(6, 2);
    const int perm[6] = {4, 2, 0, 5, 1, 3};
    for (Index i = 0; i < 6; ++i) permuted.row(i) = refs.row(perm[i]);
    const auto ctx_perm = two_class_context(permuted, other);
    CHECK(log_class_density(y, ctx_perm, 0) == doctest::Approx(base).epsilon(1e-12));

    Vector shift(2);
    shift << 13.5, -7.25;
    const auto ctx_shift =
        two_class_context((refs.rowwise() + shift.transpose()).eval(),
                          (other.rowwise() + shift.transpose()).eval());
    CHECK(log_class_density((y + shift).eval(), ctx_shift, 0) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("1-D density integrates to one") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Index m = 3 + static_cast<Index>(rng() % 6);
        Matrix refs(m, 1);
        for (Index i = 0; i < m; ++i) refs(i, 0) = gauss(rng);
        Matrix other = refs.array() + 1.0;
        const auto ctx = two_class_context(refs, other);

        const double h = std::sqrt(ctx.bandwidths[0][0]);
        const double lo = refs.minCoeff() - 8.0 * h;
        const double hi = refs.maxCoeff() + 8.0 * h;
        const int grid = 4000;
        const double dx = (hi - lo) / grid;
        double integral = 0.0;
        Vector y(1);
        for (int g = 0; g <= grid; ++g) {
            y[0] = lo + g * dx;
            const double f = std::exp(log_class_density(y, ctx, 0));
            integral += (g == 0 || g == grid) ? 0.5 * f : f;
        }
        integral *= dx;
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("2-D density integrates to one") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix refs(5, 2);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 2; ++j) refs(i, j) = gauss(rng);
    Matrix other = refs.array() + 1.0;
    const auto ctx = two_class_context(refs, other);

    const double h0 = std::sqrt(ctx.bandwidths[0][0]);
    const double h1 = std::sqrt(ctx.bandwidths[0][1]);
    const double lo0 = refs.col(0).minCoeff() - 8.0 * h0;
    const double hi0 = refs.col(0).maxCoeff() + 8.0 * h0;
    const double lo1 = refs.col(1).minCoeff() - 8.0 * h1;
    const double hi1 = refs.col(1).maxCoeff() + 8.0 * h1;
    const int grid = 300;
    const double dx = (hi0 - lo0) / grid;
    const double dy = (hi1 - lo1) / grid;
    double integral = 0.0;
    Vector y(2);
    for (int gi = 0; gi <= grid; ++gi) {
        y[0] = lo0 + gi * dx;
        const double wx = (gi == 0 || gi == grid) ? 0.5 : 1.0;
        for (int gj = 0; gj <= grid; ++gj) {
            y[1] = lo1 + gj * dy;
            const double wy = (gj == 0 || gj == grid) ? 0.5 : 1.0;
            integral += wx * wy * std::exp(log_class_density(y, ctx, 0));
        }
    }
    integral *= dx * dy;
    CHECK(integral == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("context construction validates its inputs") {
    Matrix ok(3, 1), tiny(1, 1);
    ok << 0.0, 1.0, 2.0;
    tiny << 0.0;
    Vector priors(2);
    priors << 0.5, 0.5;
    CHECK_THROWS_AS(KdeContext::build({ok, tiny}, priors), DataError);
    Vector bad_priors(2);
    bad_priors << 0.7, 0.6;
    CHECK_THROWS_AS(KdeContext::build({ok, ok}, bad_priors), DataError);
    CHECK_THROWS_AS(KdeContext::build({}, Vector{}), DataError);
}

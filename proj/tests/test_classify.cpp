#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lapdict/classify.hpp"
#include "test_util.hpp"

using namespace lapdict;
using namespace lapdict::testing;

namespace {

Eigen::MatrixXd sparse_signals(const Eigen::MatrixXd& dict, int s, int count, double noise,
                               Rng& rng) {
    Eigen::MatrixXd y(dict.rows(), count);
    for (int c = 0; c < count; ++c) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(dict.rows());
        for (const auto j :
             rng.sample_indices(static_cast<std::size_t>(dict.cols()), static_cast<std::size_t>(s)))
            col += rng.normal() * dict.col(static_cast<Eigen::Index>(j));
        if (noise > 0.0) col += noise * random_vector(dict.rows(), rng);
        y.col(c) = col;
    }
    return y;
}

}  // namespace

TEST_CASE("baseline_dl_train error trace is non-increasing") {
    Rng rng(1);
    const Eigen::MatrixXd truth = random_unit_columns(12, 20, rng);
    const Eigen::MatrixXd y = sparse_signals(truth, 3, 80, 0.01, rng);

    BaselineTrainStats stats;
    Rng train_rng(2);
    const Eigen::MatrixXd dict = baseline_dl_train(y, 20, 3, 8, train_rng, &stats);
    REQUIRE(stats.error_trace.size() == 8);
    for (std::size_t k = 1; k < stats.error_trace.size(); ++k)
        CHECK(stats.error_trace[k] <= stats.error_trace[k - 1] * (1.0 + 1e-9));
    for (Eigen::Index j = 0; j < dict.cols(); ++j)
        CHECK(dict.col(j).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("baseline_dl_train reaches the noise floor on sparse synthetic data") {
    Rng rng(3);
    const Eigen::MatrixXd truth = random_unit_columns(10, 14, rng);
    const Eigen::MatrixXd y = sparse_signals(truth, 2, 120, 0.0, rng);

    BaselineTrainStats stats;
    Rng train_rng(4);
    baseline_dl_train(y, 14, 2, 25, train_rng, &stats);
    // exactly representable data: the trained dictionary drives the total
    // squared error to (near) zero
    CHECK(stats.error_trace.back() <= 1e-6 * y.squaredNorm());
}

TEST_CASE("src_classify separates class-specific spans") {
    Rng rng(5);
    const Eigen::MatrixXd dict_a = random_unit_columns(16, 8, rng);
    const Eigen::MatrixXd dict_b = random_unit_columns(16, 8, rng);
    const Eigen::MatrixXd ya = sparse_signals(dict_a, 2, 15, 0.0, rng);
    const Eigen::MatrixXd yb = sparse_signals(dict_b, 2, 15, 0.0, rng);
    Eigen::MatrixXd y(16, 30);
    y << ya, yb;
    const auto labels = src_classify({dict_a, dict_b}, y, 2);
    for (int i = 0; i < 15; ++i) CHECK(labels[static_cast<std::size_t>(i)] == 0);
    for (int i = 15; i < 30; ++i) CHECK(labels[static_cast<std::size_t>(i)] == 1);
}

TEST_CASE("src_classify with one class is constant") {
    Rng rng(6);
    const Eigen::MatrixXd dict = random_unit_columns(8, 6, rng);
    const auto labels = src_classify({dict}, random_matrix(8, 9, rng), 2);
    for (const auto l : labels) CHECK(l == 0);
}

TEST_CASE("src_classify depends only on the error ordering") {
    Rng rng(7);
    const Eigen::MatrixXd dict_a = random_unit_columns(10, 7, rng);
    const Eigen::MatrixXd dict_b = random_unit_columns(10, 7, rng);
    const Eigen::MatrixXd y = random_matrix(10, 20, rng);
    Eigen::MatrixXd err;
    const auto labels = src_classify({dict_a, dict_b}, y, 3, &err);
    for (Eigen::Index i = 0; i < 20; ++i) {
        const auto expected = err(0, i) <= err(1, i) ? 0u : 1u;
        CHECK(labels[static_cast<std::size_t>(i)] == expected);
    }
}

TEST_CASE("evaluate worked examples") {
    // identical labels
    const std::vector<std::uint32_t> t1 = {0, 1, 1, 0};
    CHECK(evaluate(t1, t1).accuracy == 1.0);

    // all wrong on binary labels
    const std::vector<std::uint32_t> p2 = {1, 0, 0, 1};
    CHECK(evaluate(t1, p2).accuracy == 0.0);

    // hand-built four-sample confusion
    const std::vector<std::uint32_t> truth = {0, 0, 1, 1};
    const std::vector<std::uint32_t> pred = {0, 1, 1, 1};
    const ClassifierReport r = evaluate(truth, pred);
    CHECK(r.accuracy == doctest::Approx(0.75));
    CHECK(r.confusion[0][0] == 1);
    CHECK(r.confusion[0][1] == 1);
    CHECK(r.confusion[1][0] == 0);
    CHECK(r.confusion[1][1] == 2);
    CHECK(r.precision[0] == doctest::Approx(1.0));
    CHECK(r.precision[1] == doctest::Approx(2.0 / 3.0));
    CHECK(r.recall[0] == doctest::Approx(0.5));
    CHECK(r.recall[1] == doctest::Approx(1.0));

    // row sums match per-class test counts; total equals N
    std::uint64_t total = 0;
    for (const auto& row : r.confusion)
        for (const auto v : row) total += v;
    CHECK(total == truth.size());

    CHECK_THROWS_AS(evaluate({0, 1}, {0}), std::invalid_argument);
}

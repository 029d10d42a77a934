#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "morallex/logreg.hpp"
#include "morallex/util/rng.hpp"
#include "oracles.hpp"

using namespace morallex;

namespace {

Eigen::MatrixXd random_features(Eigen::Index n, Eigen::Index d,
                                std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.gaussian();
  }
  return x;
}

std::vector<int> random_labels(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (auto& v : y) v = rng.below(2) == 0 ? 0 : 1;
  // guarantee both classes
  y[0] = 0;
  y[static_cast<std::size_t>(n) - 1] = 1;
  return y;
}

}  // namespace

TEST_CASE("separable 1-d problem reaches training accuracy 1.0") {
  Eigen::MatrixXd x(2, 1);
  x << -1.0, 1.0;
  LogRegConfig config;
  config.lambda = 0.1;
  const auto model = fit_logreg(x, {0, 1}, config);
  const auto predictions = predict(model, x);
  CHECK(predictions == std::vector<int>{0, 1});
}

TEST_CASE("analytic gradient matches central finite differences") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Rng rng(trial + 71);
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.below(12));
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(6));
    const Eigen::MatrixXd x = random_features(n, d, trial + 100);
    const auto y = random_labels(n, trial + 200);
    const double lambda = rng.real01() * 2.0;
    Eigen::VectorXd w(d);
    for (Eigen::Index j = 0; j < d; ++j) w(j) = rng.gaussian() * 0.5;
    const double b = rng.gaussian() * 0.5;

    Eigen::VectorXd analytic_w;
    double analytic_b = 0.0;
    logreg_gradient(x, y, lambda, w, b, &analytic_w, &analytic_b);

    Eigen::VectorXd numeric_w;
    double numeric_b = 0.0;
    oracles::finite_diff_gradient(
        [&](const Eigen::VectorXd& wi, double bi) {
          return logreg_loss(x, y, lambda, wi, bi);
        },
        w, b, 1e-5, &numeric_w, &numeric_b);

    for (Eigen::Index j = 0; j < d; ++j) {
      CHECK(std::fabs(analytic_w(j) - numeric_w(j)) <= 1e-5);
    }
    CHECK(std::fabs(analytic_b - numeric_b) <= 1e-5);
  }
}

TEST_CASE("training loss never increases across accepted steps") {
  const Eigen::MatrixXd x = random_features(40, 5, 3);
  const auto y = random_labels(40, 4);
  LogRegConfig config;
  const auto model = fit_logreg(x, y, config);
  const auto& history = model.record().loss_history;
  REQUIRE(history.size() >= 2);
  for (std::size_t i = 1; i < history.size(); ++i) {
    CHECK(history[i] <= history[i - 1] + 1e-15);
  }
  CHECK(model.record().converged);
}

TEST_CASE("fit is bit-for-bit deterministic") {
  const Eigen::MatrixXd x = random_features(30, 4, 9);
  const auto y = random_labels(30, 10);
  LogRegConfig config;
  const auto a = fit_logreg(x, y, config);
  const auto b = fit_logreg(x, y, config);
  REQUIRE(a.weights().size() == b.weights().size());
  for (Eigen::Index j = 0; j < a.weights().size(); ++j) {
    CHECK(a.weights()(j) == b.weights()(j));
  }
  CHECK(a.bias() == b.bias());
}

TEST_CASE("single-class labels are rejected") {
  const Eigen::MatrixXd x = random_features(5, 2, 1);
  CHECK_THROWS_AS(fit_logreg(x, {1, 1, 1, 1, 1}, LogRegConfig{}),
                  std::invalid_argument);
}

TEST_CASE("non-finite features are rejected") {
  Eigen::MatrixXd x = random_features(4, 2, 2);
  x(1, 1) = std::nan("");
  CHECK_THROWS_AS(fit_logreg(x, {0, 1, 0, 1}, LogRegConfig{}),
                  std::invalid_argument);
}

TEST_CASE("zero weights give probability exactly one half") {
  LogRegModel model(Eigen::VectorXd::Zero(3), 0.0, 1.0, {}, "");
  Eigen::MatrixXd x = random_features(5, 3, 8);
  const auto p = predict_proba(model, x);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    CHECK(p(i) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("probabilities are monotone in the linear score") {
  Eigen::VectorXd w(1);
  w << 1.0;
  LogRegModel model(w, 0.0, 1.0, {}, "");
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 5.0, 50.0;
  const auto p = predict_proba(model, x);
  CHECK(p(0) == doctest::Approx(0.5));
  CHECK(p(1) > p(0));
  CHECK(p(2) > p(1));
  CHECK(p(2) < 1.0);  // clamped into the open interval
  CHECK(p(2) > 0.0);
}

TEST_CASE("predict_proba enforces the schema id") {
  LogRegModel model(Eigen::VectorXd::Zero(2), 0.0, 1.0, {}, "docvec:x");
  Eigen::MatrixXd x = random_features(2, 2, 5);
  CHECK_THROWS_AS(predict_proba(model, x, "docvec:y"), std::invalid_argument);
  CHECK_NOTHROW(predict_proba(model, x, "docvec:x"));
}

TEST_CASE("f1_macro of perfect predictions is one") {
  CHECK(f1_macro(std::vector<int>{1, 0, 1, 0}, std::vector<int>{1, 0, 1, 0}) ==
        doctest::Approx(1.0));
}

TEST_CASE("f1_macro hand-computed case: all-positive predictions") {
  // class 1: precision 1/2, recall 1 -> F1 = 2/3; class 0: F1 = 0.
  const double f1 =
      f1_macro(std::vector<int>{1, 1, 0, 0}, std::vector<int>{1, 1, 1, 1});
  CHECK(f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("f1_macro near one half for random balanced labels") {
  Rng rng(1234);
  const int n = 20000;
  std::vector<int> truth(n), pred(n);
  for (int i = 0; i < n; ++i) {
    truth[static_cast<std::size_t>(i)] = i % 2;
    pred[static_cast<std::size_t>(i)] = rng.below(2) == 0 ? 0 : 1;
  }
  CHECK(f1_macro(truth, pred) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("f1_macro is invariant under simultaneous relabeling") {
  const std::vector<int> truth = {1, 0, 1, 1, 0, 0, 1};
  const std::vector<int> pred = {1, 1, 0, 1, 0, 1, 1};
  std::vector<int> truth_swapped, pred_swapped;
  for (int v : truth) truth_swapped.push_back(1 - v);
  for (int v : pred) pred_swapped.push_back(1 - v);
  CHECK(f1_macro(truth, pred) ==
        doctest::Approx(f1_macro(truth_swapped, pred_swapped)).epsilon(1e-12));
}

TEST_CASE("f1_macro rejects mismatched or empty inputs") {
  CHECK_THROWS_AS(f1_macro(std::vector<int>{1}, std::vector<int>{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(f1_macro(std::vector<int>{}, std::vector<int>{}),
                  std::invalid_argument);
}

TEST_CASE("model JSON round-trip preserves weights and record") {
  const Eigen::MatrixXd x = random_features(20, 3, 6);
  const auto y = random_labels(20, 7);
  LogRegConfig config;
  config.seed = 99;
  const auto model = fit_logreg(x, y, config, "docvec:roundtrip");
  const auto path =
      (std::filesystem::temp_directory_path() / "model_rt.json").string();
  save_model(model, path);
  const auto back = load_model(path);
  CHECK(back.schema_id() == "docvec:roundtrip");
  CHECK(back.bias() == model.bias());
  CHECK(back.lambda() == model.lambda());
  CHECK(back.record().seed == 99);
  CHECK(back.record().converged == model.record().converged);
  REQUIRE(back.weights().size() == model.weights().size());
  for (Eigen::Index j = 0; j < model.weights().size(); ++j) {
    CHECK(back.weights()(j) == model.weights()(j));
  }
}

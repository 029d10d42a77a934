#ifndef MORALLEX_LOGREG_HPP
#define MORALLEX_LOGREG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace morallex {

struct LogRegConfig {
  double lambda = 1.0;       // L2 strength on the weights (bias excluded)
  double tolerance = 1e-6;   // gradient max-norm stopping criterion
  int max_iterations = 1000;
  std::uint64_t seed = 0;    // recorded; the solver itself is deterministic
};

struct TrainingRecord {
  int iterations = 0;
  double final_loss = 0.0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::vector<double> loss_history;  // loss after each accepted step
};

// Binary L2-regularized logistic regression fit by full-batch gradient
// descent with Armijo backtracking. Objective:
//   J(w, b) = mean_i nll_i + lambda / (2n) * ||w||^2.
class LogRegModel {
 public:
  LogRegModel() = default;
  LogRegModel(Eigen::VectorXd weights, double bias, double lambda,
              TrainingRecord record, std::string schema_id)
      : weights_(std::move(weights)), bias_(bias), lambda_(lambda),
        record_(std::move(record)), schema_id_(std::move(schema_id)) {}

  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  double lambda() const { return lambda_; }
  const TrainingRecord& record() const { return record_; }
  const std::string& schema_id() const { return schema_id_; }

 private:
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
  double lambda_ = 1.0;
  TrainingRecord record_;
  std::string schema_id_;
};

// Labels are 0/1; both classes must be present and features finite.
LogRegModel fit_logreg(const Eigen::MatrixXd& features,
                       const std::vector<int>& labels,
                       const LogRegConfig& config,
                       const std::string& schema_id = "");

// Analytic gradient of the objective at (weights, bias); exposed so tests
// can check it against finite differences.
void logreg_gradient(const Eigen::MatrixXd& features,
                     const std::vector<int>& labels, double lambda,
                     const Eigen::VectorXd& weights, double bias,
                     Eigen::VectorXd* grad_w, double* grad_b);
double logreg_loss(const Eigen::MatrixXd& features,
                   const std::vector<int>& labels, double lambda,
                   const Eigen::VectorXd& weights, double bias);

// probability = logistic(w.x + b), clamped to the open interval (0, 1);
// label = probability >= 0.5. Throws on schema mismatch.
Eigen::VectorXd predict_proba(const LogRegModel& model,
                              const Eigen::MatrixXd& features,
                              const std::string& schema_id = "");
std::vector<int> predict(const LogRegModel& model,
                         const Eigen::MatrixXd& features,
                         const std::string& schema_id = "");

// Unweighted mean of per-class F1 over the classes present in `truth`;
// a class with no true and no predicted positives contributes zero.
double f1_macro(std::span<const int> truth, std::span<const int> predicted);

void save_model(const LogRegModel& model, const std::string& path);
LogRegModel load_model(const std::string& path);

}  // namespace morallex

#endif

#include "morallex/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "morallex/util/log.hpp"

namespace morallex {

using nlohmann::json;

namespace {

void check_inputs(const Eigen::MatrixXd& features,
                  const std::vector<int>& labels) {
  if (features.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw std::invalid_argument("logreg: feature/label row count mismatch");
  }
  if (features.rows() < 2) {
    throw std::invalid_argument("logreg: need at least two training rows");
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("logreg: non-finite feature values");
  }
  bool has0 = false, has1 = false;
  for (int y : labels) {
    if (y == 0) has0 = true;
    else if (y == 1) has1 = true;
    else throw std::invalid_argument("logreg: labels must be 0 or 1");
  }
  if (!has0 || !has1) {
    throw std::invalid_argument("logreg: both classes must be present");
  }
}

// log(1 + e^z) - y z, stable on both tails.
inline double nll_term(double z, int y) {
  const double softplus =
      z >= 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return softplus - static_cast<double>(y) * z;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

double logreg_loss(const Eigen::MatrixXd& features,
                   const std::vector<int>& labels, double lambda,
                   const Eigen::VectorXd& weights, double bias) {
  const auto n = static_cast<double>(features.rows());
  const Eigen::VectorXd z =
      (features * weights).array() + bias;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += nll_term(z(i), labels[static_cast<std::size_t>(i)]);
  }
  return sum / n + lambda / (2.0 * n) * weights.squaredNorm();
}

void logreg_gradient(const Eigen::MatrixXd& features,
                     const std::vector<int>& labels, double lambda,
                     const Eigen::VectorXd& weights, double bias,
                     Eigen::VectorXd* grad_w, double* grad_b) {
  const auto n = static_cast<double>(features.rows());
  Eigen::VectorXd residual(features.rows());
  const Eigen::VectorXd z = (features * weights).array() + bias;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    residual(i) = sigmoid(z(i)) - static_cast<double>(labels[static_cast<std::size_t>(i)]);
  }
  *grad_w = (features.transpose() * residual + lambda * weights) / n;
  *grad_b = residual.sum() / n;
}

LogRegModel fit_logreg(const Eigen::MatrixXd& features,
                       const std::vector<int>& labels,
                       const LogRegConfig& config,
                       const std::string& schema_id) {
  check_inputs(features, labels);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(features.cols());
  double b = 0.0;
  double loss = logreg_loss(features, labels, config.lambda, w, b);

  TrainingRecord record;
  record.seed = config.seed;
  record.loss_history.push_back(loss);

  Eigen::VectorXd grad_w(features.cols());
  double grad_b = 0.0;
  double step = 1.0;
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    logreg_gradient(features, labels, config.lambda, w, b, &grad_w, &grad_b);
    const double grad_max =
        std::max(grad_w.size() > 0 ? grad_w.cwiseAbs().maxCoeff() : 0.0,
                 std::fabs(grad_b));
    if (grad_max <= config.tolerance) {
      record.converged = true;
      break;
    }
    // Armijo backtracking along the negative gradient.
    const double grad_sq = grad_w.squaredNorm() + grad_b * grad_b;
    double t = std::min(1.0, step * 2.0);
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      const Eigen::VectorXd w_new = w - t * grad_w;
      const double b_new = b - t * grad_b;
      const double loss_new =
          logreg_loss(features, labels, config.lambda, w_new, b_new);
      if (loss_new <= loss - 1e-4 * t * grad_sq) {
        w = w_new;
        b = b_new;
        loss = loss_new;
        step = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      log::warn("logreg: line search stalled at iteration " +
                std::to_string(iter));
      break;
    }
    record.loss_history.push_back(loss);
  }
  record.iterations = iter;
  record.final_loss = loss;
  return LogRegModel(std::move(w), b, config.lambda, std::move(record),
                     schema_id);
}

Eigen::VectorXd predict_proba(const LogRegModel& model,
                              const Eigen::MatrixXd& features,
                              const std::string& schema_id) {
  if (!model.schema_id().empty() && !schema_id.empty() &&
      model.schema_id() != schema_id) {
    throw std::invalid_argument("logreg: model expects schema '" +
                                model.schema_id() + "', got '" + schema_id +
                                "'");
  }
  if (features.cols() != model.weights().size()) {
    throw std::invalid_argument("logreg: feature dimension mismatch");
  }
  Eigen::VectorXd p = (features * model.weights()).array() + model.bias();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p(i) = std::clamp(sigmoid(p(i)), 1e-15, 1.0 - 1e-15);
  }
  return p;
}

std::vector<int> predict(const LogRegModel& model,
                         const Eigen::MatrixXd& features,
                         const std::string& schema_id) {
  const Eigen::VectorXd p = predict_proba(model, features, schema_id);
  std::vector<int> labels(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = p(i) >= 0.5 ? 1 : 0;
  }
  return labels;
}

double f1_macro(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("logreg: f1_macro label length mismatch");
  }
  if (truth.empty()) {
    throw std::invalid_argument("logreg: f1_macro needs nonempty labels");
  }
  std::set<int> classes(truth.begin(), truth.end());
  double sum = 0.0;
  for (int cls : classes) {
    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool t = truth[i] == cls;
      const bool p = predicted[i] == cls;
      if (t && p) ++tp;
      else if (!t && p) ++fp;
      else if (t && !p) ++fn;
    }
    const long long denom = 2 * tp + fp + fn;
    sum += denom == 0 ? 0.0
                      : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return sum / static_cast<double>(classes.size());
}

void save_model(const LogRegModel& model, const std::string& path) {
  json obj;
  obj["schema_id"] = model.schema_id();
  obj["bias"] = model.bias();
  obj["lambda"] = model.lambda();
  std::vector<double> w(model.weights().data(),
                        model.weights().data() + model.weights().size());
  obj["weights"] = w;
  json rec;
  rec["iterations"] = model.record().iterations;
  rec["final_loss"] = model.record().final_loss;
  rec["converged"] = model.record().converged;
  rec["seed"] = model.record().seed;
  obj["training_record"] = rec;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("logreg: cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

LogRegModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("logreg: cannot open file: " + path);
  json obj = json::parse(in);
  const auto w = obj.at("weights").get<std::vector<double>>();
  Eigen::VectorXd weights(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    weights(static_cast<Eigen::Index>(i)) = w[i];
  }
  TrainingRecord record;
  const auto& rec = obj.at("training_record");
  record.iterations = rec.at("iterations").get<int>();
  record.final_loss = rec.at("final_loss").get<double>();
  record.converged = rec.at("converged").get<bool>();
  record.seed = rec.at("seed").get<std::uint64_t>();
  return LogRegModel(std::move(weights), obj.at("bias").get<double>(),
                     obj.at("lambda").get<double>(), std::move(record),
                     obj.at("schema_id").get<std::string>());
}

}  // namespace morallex

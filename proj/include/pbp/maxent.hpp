#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbp/linear_model.hpp"
#include "pbp/perceptron.hpp"

namespace pbp {

enum class RiskLabel { Safe, Risky };

struct LabeledFeatures {
  FeatureVector features;
  RiskLabel label = RiskLabel::Safe;
};

struct MaxEntOptions {
  double l2_sigma = 1.0;
  double tol = 1e-6;
  int max_iter = 500;
};

// Binary logistic negative log-likelihood plus (1/(2 sigma^2)) * |w|^2.
// Parameter 0 is the unregularized bias; parameter i > 0 belongs to feature id i-1.
class MaxEntObjective {
 public:
  MaxEntObjective(const std::vector<LabeledFeatures>& examples, double l2_sigma);

  std::size_t dimension() const { return index_.size() + 1; }
  const FeatureIndex& index() const { return index_; }
  // Writes the gradient into grad (size dimension()) and returns the objective.
  double evaluate(std::span<const double> params, std::span<double> grad) const;
  LinearModel to_model(std::span<const double> params) const;

 private:
  FeatureIndex index_;
  std::vector<std::size_t> row_start_;
  std::vector<FeatureId> cols_;
  std::vector<double> vals_;
  std::vector<double> sign_;  // +1 risky, -1 safe
  double inv_var_;
};

struct MaxEntTrace {
  std::vector<double> objective;  // value after each accepted step, starting at w = 0
  int iterations = 0;
  bool converged = false;
  double final_grad_norm = 0.0;  // max-norm
};

// Deterministic L-BFGS with Armijo backtracking. Throws DataError when only one
// label is present or a feature value is not finite.
LinearModel train_maxent(const std::vector<LabeledFeatures>& examples, const MaxEntOptions& options = {},
                         MaxEntTrace* trace = nullptr);

double logistic(double score);

enum class FeatureSet { ActionProcess, ActionState, EdgeState, EdgeFactored, EdgeHigher };

std::string_view to_string(FeatureSet fs);
FeatureSet parse_feature_set(std::string_view name);  // throws std::invalid_argument
bool is_edge_set(FeatureSet fs);

struct RiskModel {
  LinearModel model{ModelKind::MaxEnt};
  FeatureSet feature_set = FeatureSet::EdgeFactored;
};

// Probability that the decision described by fv is wrong; strictly inside (0,1).
double predict_risk(const RiskModel& rm, const FeatureVector& fv);
// Exactly 1 - predict_risk.
double predict_safe(const RiskModel& rm, const FeatureVector& fv);

void save_risk_model(const RiskModel& rm, const std::string& path);
RiskModel load_risk_model(const std::string& path);

}  // namespace pbp

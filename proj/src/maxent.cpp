#include "pbp/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "pbp/error.hpp"

namespace pbp {

namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Correction {
  std::vector<double> s, y;
  double rho;
};

}  // namespace

MaxEntObjective::MaxEntObjective(const std::vector<LabeledFeatures>& examples, double l2_sigma)
    : inv_var_(1.0 / (l2_sigma * l2_sigma)) {
  if (!(l2_sigma > 0.0)) throw std::invalid_argument("l2_sigma must be positive");
  row_start_.push_back(0);
  for (const auto& ex : examples) {
    for (const auto& [name, value] : ex.features.entries()) {
      if (!std::isfinite(value)) throw DataError("feature '" + name + "' has a non-finite value");
      cols_.push_back(index_.intern(name));
      vals_.push_back(value);
    }
    row_start_.push_back(cols_.size());
    sign_.push_back(ex.label == RiskLabel::Risky ? 1.0 : -1.0);
  }
}

double MaxEntObjective::evaluate(std::span<const double> params, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  double f = 0.0;
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    double z = params[0];
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      z += params[static_cast<std::size_t>(cols_[k]) + 1] * vals_[k];
    }
    const double m = sign_[r] * z;
    f += softplus(-m);
    // d/dz softplus(-y z) = -y * sigmoid(-y z)
    const double dz = -sign_[r] * logistic(-m);
    grad[0] += dz;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      grad[static_cast<std::size_t>(cols_[k]) + 1] += dz * vals_[k];
    }
  }
  double reg = 0.0;
  for (std::size_t i = 1; i < params.size(); ++i) {
    reg += params[i] * params[i];
    grad[i] += inv_var_ * params[i];
  }
  return f + 0.5 * inv_var_ * reg;
}

LinearModel MaxEntObjective::to_model(std::span<const double> params) const {
  LinearModel model(ModelKind::MaxEnt);
  model.set_weight(std::string(kBiasFeature), params[0]);
  for (std::size_t i = 0; i < index_.size(); ++i) {
    model.set_weight(index_.name(static_cast<FeatureId>(i)), params[i + 1]);
  }
  return model;
}

LinearModel train_maxent(const std::vector<LabeledFeatures>& examples, const MaxEntOptions& options,
                         MaxEntTrace* trace) {
  std::size_t risky = 0;
  for (const auto& ex : examples) risky += ex.label == RiskLabel::Risky ? 1 : 0;
  if (risky == 0 || risky == examples.size()) {
    throw DataError("MaxEnt training needs both RISKY and SAFE examples (got " + std::to_string(risky) +
                    " risky of " + std::to_string(examples.size()) + ")");
  }
  const MaxEntObjective obj(examples, options.l2_sigma);
  const std::size_t n = obj.dimension();
  std::vector<double> x(n, 0.0), g(n), x_new(n), g_new(n), d(n);
  double f = obj.evaluate(x, g);
  MaxEntTrace local;
  local.objective.push_back(f);

  constexpr std::size_t kHistory = 10;
  std::deque<Correction> history;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    if (max_norm(g) < options.tol) {
      local.converged = true;
      break;
    }
    // two-loop recursion
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha[k] = history[k].rho * dot(history[k].s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * history[k].y[i];
    }
    if (!history.empty()) {
      const auto& last = history.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * dot(history[k].y, d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[k] - beta) * history[k].s[i];
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      history.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }
    double step = history.empty() ? std::min(1.0, 1.0 / max_norm(g)) : 1.0;
    bool accepted = false;
    double f_new = f;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = obj.evaluate(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (history.empty()) break;  // no progress possible along the gradient either
      history.clear();
      continue;
    }
    if (f_new > f) throw std::logic_error("MaxEnt objective increased on an accepted step");
    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-12) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (history.size() > kHistory) history.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    local.objective.push_back(f);
  }
  if (!local.converged && max_norm(g) < options.tol) local.converged = true;
  local.iterations = iter;
  local.final_grad_norm = max_norm(g);
  LinearModel model = obj.to_model(x);
  model.metadata()["sigma"] = format_real(options.l2_sigma);
  model.metadata()["tol"] = format_real(options.tol);
  model.metadata()["max_iter"] = std::to_string(options.max_iter);
  if (trace) *trace = std::move(local);
  return model;
}

double logistic(double score) { return 1.0 / (1.0 + std::exp(-score)); }

std::string_view to_string(FeatureSet fs) {
  switch (fs) {
    case FeatureSet::ActionProcess: return "action_process";
    case FeatureSet::ActionState: return "action_state";
    case FeatureSet::EdgeState: return "edge_state";
    case FeatureSet::EdgeFactored: return "edge_factored";
    case FeatureSet::EdgeHigher: return "edge_higher";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view name) {
  for (FeatureSet fs : {FeatureSet::ActionProcess, FeatureSet::ActionState, FeatureSet::EdgeState,
                        FeatureSet::EdgeFactored, FeatureSet::EdgeHigher}) {
    if (to_string(fs) == name) return fs;
  }
  throw std::invalid_argument("unknown feature set '" + std::string(name) + "'");
}

bool is_edge_set(FeatureSet fs) {
  return fs == FeatureSet::EdgeState || fs == FeatureSet::EdgeFactored || fs == FeatureSet::EdgeHigher;
}

double predict_risk(const RiskModel& rm, const FeatureVector& fv) {
  constexpr double kLow = std::numeric_limits<double>::min();
  constexpr double kHigh = 1.0 - 0x1.0p-53;
  return std::clamp(logistic(score(rm.model, fv)), kLow, kHigh);
}

double predict_safe(const RiskModel& rm, const FeatureVector& fv) { return 1.0 - predict_risk(rm, fv); }

void save_risk_model(const RiskModel& rm, const std::string& path) {
  LinearModel m = rm.model;
  m.metadata()["feature_set"] = std::string(to_string(rm.feature_set));
  save_model(m, path);
}

RiskModel load_risk_model(const std::string& path) {
  RiskModel rm;
  rm.model = load_model(path);
  if (rm.model.kind() != ModelKind::MaxEnt) throw ModelMismatchError("'" + path + "' is not a MaxEnt risk model");
  try {
    rm.feature_set = parse_feature_set(rm.model.require("feature_set"));
  } catch (const std::invalid_argument& e) {
    throw ModelMismatchError(e.what());
  }
  return rm;
}

}  // namespace pbp

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pbp/riskiness.hpp"

namespace pbp {

struct SelectionParams {
  double risk_threshold = 0.5;  // R
  int max_risky = 0;            // K

  // Throws std::invalid_argument when R is outside [0,1] or K < 0.
  void validate() const;
};

// Keeps head(tok) iff risk(tok) <= threshold. Throws std::invalid_argument
// when the tree carries no edge risks.
PartialDepTree prune(const RiskAnnotatedTree& rat, double risk_threshold);

// Decisions with risk strictly above the threshold; counted over action risks
// when the tree has no edge risks.
std::size_t count_risky(const RiskAnnotatedTree& rat, double risk_threshold);

struct SelectionResult {
  std::vector<std::size_t> selected;  // indices into the input, ascending
  std::vector<std::size_t> rejected;
};

SelectionResult select_parses(const std::vector<RiskAnnotatedTree>& rats, const SelectionParams& params);

// Token precision of the selected sentences (0 when nothing is selected) and sentence coverage.
struct SelectionScore {
  double precision = 0.0;
  double sentence_coverage = 0.0;
  std::size_t n_selected = 0;
};

SelectionScore score_selection(const std::vector<RiskAnnotatedTree>& rats, const std::vector<DepTree>& gold,
                               const SelectionParams& params);

struct GridPoint {
  SelectionParams params;
  SelectionScore score;
};

struct TargetChoice {
  double target = 0.0;
  std::optional<GridPoint> best;  // empty when no grid point reaches the target
};

struct GridSearchResult {
  std::vector<GridPoint> points;  // K-major, R ascending
  std::vector<TargetChoice> choices;
};

// R in {0.00, 0.01, ..., 0.50}, K in {0..4}.
std::vector<SelectionParams> selection_grid();

// 0.890, 0.895, ..., 0.990.
std::vector<double> default_precision_targets();

// For each target, the grid point with the highest sentence coverage among those
// with precision >= target; ties go to smaller K, then larger R.
GridSearchResult grid_search(const std::vector<RiskAnnotatedTree>& rats_dev, const std::vector<DepTree>& gold_dev,
                             const std::vector<double>& precision_targets);

}  // namespace pbp

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pbp/riskiness.hpp"
#include "pbp/treebank.hpp"

namespace pbp {

struct EvalOptions {
  // Tokens whose coarse POS is listed here are left out of every count.
  std::set<std::string> excluded_pos;
};

struct EvalReport {
  std::size_t n_total = 0;     // |T|
  std::size_t n_assigned = 0;  // |A|
  std::size_t n_abstained = 0; // |S|
  std::size_t n_correct = 0;   // |C|
  double precision = 0.0;      // |C|/|A|, 0 when |A| = 0
  double recall = 0.0;         // |C|/|T|
  double coverage = 0.0;       // |A|/|T|
  double accuracy = 0.0;       // |C|/|T|, abstentions counted as errors
  std::optional<double> sentence_coverage;
};

// Throws DataError when pred and gold are not aligned.
EvalReport evaluate(const std::vector<PartialDepTree>& pred, const std::vector<DepTree>& gold,
                    const EvalOptions& options = {});

// selected / total; throws std::invalid_argument for total = 0 or selected > total.
double sentence_coverage(std::size_t selected, std::size_t total);

struct ScoredDecision {
  double risk = 0.0;
  bool correct = true;
};

struct RocPoint {
  double threshold = 0.0;  // decisions with risk > threshold are flagged
  double tpr = 0.0;        // flagged incorrect / incorrect
  double fpr = 0.0;        // flagged correct / correct
};

struct RocCurve {
  std::vector<RocPoint> points;  // threshold ascending; the first threshold is -inf
  double auc = 0.0;
};

// Thresholds at -inf and every distinct score; at most n_thresholds points are
// returned (quantile-spaced, endpoints kept), AUC uses every threshold.
// Throws DataError unless both correct and incorrect decisions are present.
RocCurve roc_curve(const std::vector<ScoredDecision>& decisions, std::size_t n_thresholds = 101);

// One decision per token with an edge risk; excluded POS are skipped.
std::vector<ScoredDecision> scored_decisions(const std::vector<RiskAnnotatedTree>& rats,
                                             const std::vector<DepTree>& gold, const EvalOptions& options = {});

struct Confusion {
  std::size_t tp = 0;  // risky & incorrect
  std::size_t fp = 0;  // risky & correct
  std::size_t tn = 0;  // safe & correct
  std::size_t fn = 0;  // safe & incorrect

  std::size_t total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o);
  bool operator==(const Confusion&) const = default;
};

struct PPRow {
  std::string form;  // lowercased
  Confusion counts;
};

struct PPBreakdown {
  Confusion overall;
  std::vector<PPRow> rows;  // total descending, then form ascending
};

PPBreakdown pp_breakdown(const std::vector<RiskAnnotatedTree>& rats, const std::vector<DepTree>& gold,
                         double risk_threshold, const std::string& prep_tag);

void write_report(const EvalReport& report, std::ostream& out);
void write_roc_tsv(const RocCurve& curve, std::ostream& out);
void write_pp_breakdown(const PPBreakdown& pp, std::ostream& out);

}  // namespace pbp

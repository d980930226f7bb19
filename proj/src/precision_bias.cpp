#include "pbp/precision_bias.hpp"

#include <stdexcept>
#include <string>

#include "pbp/error.hpp"

namespace pbp {

void SelectionParams::validate() const {
  if (!(risk_threshold >= 0.0 && risk_threshold <= 1.0)) {
    throw std::invalid_argument("risk threshold must lie in [0,1]");
  }
  if (max_risky < 0) throw std::invalid_argument("K must be non-negative");
}

PartialDepTree prune(const RiskAnnotatedTree& rat, double risk_threshold) {
  if (!rat.edge_risks) throw std::invalid_argument("pruning needs per-edge risks");
  const auto& risks = *rat.edge_risks;
  if (risks.size() != rat.tree.size()) throw std::invalid_argument("edge risk count differs from token count");
  std::vector<int> heads = rat.tree.heads();
  for (std::size_t i = 0; i < heads.size(); ++i) {
    if (!(risks[i] <= risk_threshold)) heads[i] = kAbstained;
  }
  return PartialDepTree(rat.tree.sentence(), std::move(heads));
}

std::size_t count_risky(const RiskAnnotatedTree& rat, double risk_threshold) {
  const std::vector<double>& risks = rat.edge_risks ? *rat.edge_risks : rat.action_risks;
  std::size_t n = 0;
  for (double r : risks) {
    if (r > risk_threshold) ++n;
  }
  return n;
}

SelectionResult select_parses(const std::vector<RiskAnnotatedTree>& rats, const SelectionParams& params) {
  params.validate();
  SelectionResult out;
  for (std::size_t i = 0; i < rats.size(); ++i) {
    if (count_risky(rats[i], params.risk_threshold) <= static_cast<std::size_t>(params.max_risky)) {
      out.selected.push_back(i);
    } else {
      out.rejected.push_back(i);
    }
  }
  return out;
}

namespace {

struct SentenceStats {
  std::size_t tokens = 0;
  std::size_t correct = 0;
};

std::vector<SentenceStats> sentence_stats(const std::vector<RiskAnnotatedTree>& rats, const std::vector<DepTree>& gold) {
  if (rats.size() != gold.size()) throw DataError("annotated and gold corpora differ in size");
  std::vector<SentenceStats> out(rats.size());
  for (std::size_t i = 0; i < rats.size(); ++i) {
    const DepTree& p = rats[i].tree;
    if (p.sentence() != gold[i].sentence()) {
      throw DataError("sentence " + std::to_string(i + 1) + " differs between annotated and gold input");
    }
    out[i].tokens = p.size();
    for (std::size_t t = 0; t < p.size(); ++t) {
      if (p.heads()[t] == gold[i].heads()[t]) ++out[i].correct;
    }
  }
  return out;
}

SelectionScore score_with(const std::vector<RiskAnnotatedTree>& rats, const std::vector<SentenceStats>& stats,
                          const SelectionParams& params) {
  std::size_t tokens = 0, correct = 0, selected = 0;
  for (std::size_t i = 0; i < rats.size(); ++i) {
    if (count_risky(rats[i], params.risk_threshold) > static_cast<std::size_t>(params.max_risky)) continue;
    ++selected;
    tokens += stats[i].tokens;
    correct += stats[i].correct;
  }
  SelectionScore s;
  s.n_selected = selected;
  s.precision = tokens ? static_cast<double>(correct) / static_cast<double>(tokens) : 0.0;
  s.sentence_coverage = rats.empty() ? 0.0 : static_cast<double>(selected) / static_cast<double>(rats.size());
  return s;
}

}  // namespace

SelectionScore score_selection(const std::vector<RiskAnnotatedTree>& rats, const std::vector<DepTree>& gold,
                               const SelectionParams& params) {
  params.validate();
  return score_with(rats, sentence_stats(rats, gold), params);
}

std::vector<SelectionParams> selection_grid() {
  std::vector<SelectionParams> grid;
  for (int k = 0; k <= 4; ++k) {
    for (int r = 0; r <= 50; ++r) grid.push_back({r / 100.0, k});
  }
  return grid;
}

std::vector<double> default_precision_targets() {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back((890 + 5 * i) / 1000.0);
  return t;
}

GridSearchResult grid_search(const std::vector<RiskAnnotatedTree>& rats_dev, const std::vector<DepTree>& gold_dev,
                             const std::vector<double>& precision_targets) {
  const auto stats = sentence_stats(rats_dev, gold_dev);
  GridSearchResult out;
  for (const auto& params : selection_grid()) out.points.push_back({params, score_with(rats_dev, stats, params)});
  for (double target : precision_targets) {
    TargetChoice choice{target, std::nullopt};
    for (const auto& pt : out.points) {
      if (pt.score.precision < target) continue;
      if (!choice.best) {
        choice.best = pt;
        continue;
      }
      const GridPoint& b = *choice.best;
      const bool better =
          pt.score.sentence_coverage > b.score.sentence_coverage ||
          (pt.score.sentence_coverage == b.score.sentence_coverage &&
           (pt.params.max_risky < b.params.max_risky ||
            (pt.params.max_risky == b.params.max_risky && pt.params.risk_threshold > b.params.risk_threshold)));
      if (better) choice.best = pt;
    }
    out.choices.push_back(std::move(choice));
  }
  return out;
}

}  // namespace pbp

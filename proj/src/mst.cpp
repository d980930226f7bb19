#include <algorithm>
#include <stdexcept>

#include "pbp/features.hpp"
#include "pbp/parser_model.hpp"

namespace pbp {

namespace {

void arc_ids_lookup(const MulticlassWeights& w, const Sentence& s, int h, int d, std::vector<std::string>& names,
                    std::vector<FeatureId>& ids) {
  names.clear();
  first_order_feature_names(s, h, d, names);
  w.lookup(names, ids);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

// Interned, deduplicated feature ids of every candidate arc of one sentence.
struct ArcFeatureTable {
  std::size_t n = 0;
  std::vector<std::vector<FeatureId>> ids;  // (h * (n+1) + d)

  const std::vector<FeatureId>& at(int h, int d) const {
    return ids[static_cast<std::size_t>(h) * (n + 1) + static_cast<std::size_t>(d)];
  }
};

}  // namespace

ArcScores mst_arc_scores(const MulticlassWeights& weights, const Sentence& sentence) {
  const int n = static_cast<int>(sentence.size());
  ArcScores scores(sentence.size());
  std::vector<std::string> names;
  std::vector<FeatureId> ids;
  for (int h = 0; h <= n; ++h) {
    for (int d = 1; d <= n; ++d) {
      if (h == d) continue;
      arc_ids_lookup(weights, sentence, h, d, names, ids);
      scores(h, d) = weights.score(ids, 0);
    }
  }
  return scores;
}

DepTree eisner_parse(const ParserModel& pm, const Sentence& sentence) {
  if (!pm.trained()) throw std::logic_error("parser model is untrained");
  if (pm.kind() != ParserKind::Mst1) throw std::logic_error("expected a MST1 model");
  const ArcScores scores = mst_arc_scores(pm.weights(), pm.normalize(sentence));
  return DepTree(sentence, eisner_decode(scores));
}

ParserModel train_mst1(const std::vector<DepTree>& gold_in, const TrainOptions& options) {
  std::vector<DepTree> gold;
  gold.reserve(gold_in.size());
  for (const auto& t : gold_in) gold.push_back(is_projective(t) ? t : projectivize(t));
  const auto vocab = build_vocabulary(gold);
  ParserModel shell(ParserKind::Mst1, MulticlassWeights(1), vocab, {}, options);

  Perceptron p(1);
  std::vector<ArcFeatureTable> tables(gold.size());
  {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const Sentence s = shell.normalize(gold[i].sentence());
      const int n = static_cast<int>(s.size());
      auto& tab = tables[i];
      tab.n = s.size();
      tab.ids.resize((tab.n + 1) * (tab.n + 1));
      for (int h = 0; h <= n; ++h) {
        for (int d = 1; d <= n; ++d) {
          if (h == d) continue;
          names.clear();
          first_order_feature_names(s, h, d, names);
          auto& ids = tab.ids[static_cast<std::size_t>(h) * (tab.n + 1) + static_cast<std::size_t>(d)];
          p.intern(names, ids);
          std::sort(ids.begin(), ids.end());
          ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        }
      }
    }
  }

  p = train_perceptron(std::move(p), gold.size(), options.epochs, options.seed, [&](std::size_t i, Perceptron& pc) {
    const auto& tab = tables[i];
    const int n = static_cast<int>(tab.n);
    ArcScores scores(tab.n);
    for (int h = 0; h <= n; ++h) {
      for (int d = 1; d <= n; ++d) {
        if (h != d) scores(h, d) = pc.score(tab.at(h, d), 0);
      }
    }
    const auto pred = eisner_decode(scores);
    const auto& g = gold[i].heads();
    for (int d = 1; d <= n; ++d) {
      const int gh = g[static_cast<std::size_t>(d - 1)];
      const int ph = pred[static_cast<std::size_t>(d - 1)];
      if (gh == ph) continue;
      pc.update(tab.at(gh, d), 0, 1.0);
      pc.update(tab.at(ph, d), 0, -1.0);
    }
  });
  return ParserModel(ParserKind::Mst1, p.averaged(), vocab, corpus_fingerprints(gold_in), options);
}

}  // namespace pbp

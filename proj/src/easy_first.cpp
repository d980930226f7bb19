#include "pbp/easy_first.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pbp/features.hpp"
#include "pbp/parser_model.hpp"

namespace pbp {

EasyFirstState::EasyFirstState(const Sentence& sentence) : sentence_(&sentence) {
  const std::size_t nodes = sentence.size() + 1;
  pending_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) pending_[i] = static_cast<int>(i);
  heads_.assign(nodes, -1);
  leftmost_.assign(nodes, -1);
  rightmost_.assign(nodes, -1);
  n_children_.assign(nodes, 0);
  span_lo_.resize(nodes);
  span_hi_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) span_lo_[i] = span_hi_[i] = static_cast<int>(i);
}

ParserAction EasyFirstState::make_action(ActionKind kind, int position) const {
  ParserAction a;
  a.kind = kind;
  a.position = position;
  const int left = pending_[static_cast<std::size_t>(position)];
  const int right = pending_[static_cast<std::size_t>(position + 1)];
  a.produced_edge = kind == ActionKind::AttachLeft ? std::pair{right, left} : std::pair{left, right};
  return a;
}

bool EasyFirstState::is_legal(const ParserAction& action) const {
  if (action.kind != ActionKind::AttachLeft && action.kind != ActionKind::AttachRight) return false;
  if (action.position < 0 || action.position + 1 >= static_cast<int>(pending_.size())) return false;
  return !(action.kind == ActionKind::AttachLeft && pending_[static_cast<std::size_t>(action.position)] == 0);
}

std::vector<ParserAction> EasyFirstState::legal_actions() const {
  std::vector<ParserAction> out;
  for (int i = 0; i + 1 < static_cast<int>(pending_.size()); ++i) {
    out.push_back(make_action(ActionKind::AttachRight, i));
    if (pending_[static_cast<std::size_t>(i)] != 0) out.push_back(make_action(ActionKind::AttachLeft, i));
  }
  return out;
}

void EasyFirstState::apply(const ParserAction& action) {
  if (!is_legal(action)) throw std::logic_error("illegal easy-first action");
  const ParserAction a = make_action(action.kind, action.position);
  const auto [h, d] = *a.produced_edge;
  const auto hu = static_cast<std::size_t>(h);
  const auto du = static_cast<std::size_t>(d);
  heads_[du] = h;
  if (leftmost_[hu] < 0 || d < leftmost_[hu]) leftmost_[hu] = d;
  if (rightmost_[hu] < 0 || d > rightmost_[hu]) rightmost_[hu] = d;
  ++n_children_[hu];
  span_lo_[hu] = std::min(span_lo_[hu], span_lo_[du]);
  span_hi_[hu] = std::max(span_hi_[hu], span_hi_[du]);
  const int removed = a.kind == ActionKind::AttachLeft ? a.position : a.position + 1;
  pending_.erase(pending_.begin() + removed);
}

const std::vector<std::string>& easy_first_class_tags() {
  static const std::vector<std::string> kTags{"L", "R"};
  return kTags;
}

namespace {

std::size_t class_of(ActionKind kind) { return kind == ActionKind::AttachLeft ? 0 : 1; }

}  // namespace

void easy_first_pair_feature_names(const EasyFirstState& st, int position, std::vector<std::string>& out) {
  const Sentence& s = st.sentence();
  const auto& p = st.pending();
  auto item = [&](int offset) {
    const int j = position + offset;
    return j >= 0 && j < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(j)] : -1;
  };
  const int a = item(0), b = item(1), l1 = item(-1), l2 = item(-2), r1 = item(2), r2 = item(3);
  auto child_pos = [&](int node, bool leftmost) -> const std::string& {
    if (node < 0) return kNoneSymbol;
    return pos_at(s, leftmost ? st.leftmost_child(node) : st.rightmost_child(node));
  };
  auto child_form = [&](int node) -> const std::string& {
    return node < 0 ? kNoneSymbol : form_at(s, st.rightmost_child(node));
  };
  const std::string& ap = pos_at(s, a);
  const std::string& aw = form_at(s, a);
  const std::string& bp = pos_at(s, b);
  const std::string& bw = form_at(s, b);
  const std::string& l1p = pos_at(s, l1);
  const std::string& l2p = pos_at(s, l2);
  const std::string& r1p = pos_at(s, r1);
  const std::string& r2p = pos_at(s, r2);
  const std::string& alc = child_pos(a, true);
  const std::string& arc = child_pos(a, false);
  const std::string& blc = child_pos(b, true);
  const std::string& brc = child_pos(b, false);

  out.push_back(feat("bias"));
  out.push_back(feat("ap", ap));
  out.push_back(feat("aw", aw));
  out.push_back(feat("awp", aw, ap));
  out.push_back(feat("bp", bp));
  out.push_back(feat("bw", bw));
  out.push_back(feat("bwp", bw, bp));
  out.push_back(feat("ap_bp", ap, bp));
  out.push_back(feat("aw_bp", aw, bp));
  out.push_back(feat("ap_bw", ap, bw));
  out.push_back(feat("aw_bw", aw, bw));
  out.push_back(feat("ap_alc_arc", ap, alc, arc));
  out.push_back(feat("bp_blc_brc", bp, blc, brc));
  out.push_back(feat("ap_bp_arc", ap, bp, arc));
  out.push_back(feat("ap_bp_blc", ap, bp, blc));
  out.push_back(feat("ap_bp_brc", ap, bp, brc));
  out.push_back(feat("aw_brcw", aw, child_form(b)));
  out.push_back(feat("arcw_bw", child_form(a), bw));
  out.push_back(feat("l1p_ap_bp", l1p, ap, bp));
  out.push_back(feat("ap_bp_r1p", ap, bp, r1p));
  out.push_back(feat("l2p_l1p_ap_bp", l2p, l1p, ap, bp));
  out.push_back(feat("ap_bp_r1p_r2p", ap, bp, r1p, r2p));
  out.push_back(feat("l1w_ap_bp", form_at(s, l1), ap, bp));
  out.push_back(feat("ap_bp_r1w", ap, bp, form_at(s, r1)));
  out.push_back(feat("l1w_bw", form_at(s, l1), bw));
  out.push_back(feat("l1p_bw", l1p, bw));
  out.push_back(feat("alen_ap_bp", distance_bin(a > 0 ? st.span_length(a) : 0), ap, bp));
  out.push_back(feat("blen_ap_bp", distance_bin(st.span_length(b)), ap, bp));
}

FeatureVector extract_easy_first_state_features(const EasyFirstState& state, const ParserAction& action) {
  std::vector<std::string> base;
  easy_first_pair_feature_names(state, action.position, base);
  const std::string& tag = easy_first_class_tags()[class_of(action.kind)];
  for (auto& name : base) name = tag + "~" + name;
  return FeatureVector::indicators(std::move(base));
}

bool easy_first_action_valid(const EasyFirstState& state, const ParserAction& action,
                             const std::vector<int>& gold_heads, const std::vector<int>& gold_child_count) {
  const auto [h, d] = *state.make_action(action.kind, action.position).produced_edge;
  return gold_heads[static_cast<std::size_t>(d - 1)] == h &&
         state.n_children(d) == gold_child_count[static_cast<std::size_t>(d)];
}

namespace {

// Feature ids of every adjacent pending pair, recomputed only around the last action.
class PairCache {
 public:
  explicit PairCache(std::size_t n_pairs) : ids_(n_pairs), dirty_(n_pairs, 1) {}

  template <typename ToIds>
  const std::vector<FeatureId>& get(const EasyFirstState& st, int pos, ToIds&& to_ids) {
    const auto u = static_cast<std::size_t>(pos);
    if (dirty_[u]) {
      names_.clear();
      easy_first_pair_feature_names(st, pos, names_);
      to_ids(names_, ids_[u]);
      dirty_[u] = 0;
    }
    return ids_[u];
  }

  void after_apply(int position) {
    ids_.erase(ids_.begin() + position);
    dirty_.erase(dirty_.begin() + position);
    const int lo = std::max(0, position - 3);
    const int hi = std::min(static_cast<int>(dirty_.size()) - 1, position + 2);
    for (int j = lo; j <= hi; ++j) dirty_[static_cast<std::size_t>(j)] = 1;
  }

 private:
  std::vector<std::vector<FeatureId>> ids_;
  std::vector<char> dirty_;
  std::vector<std::string> names_;
};

struct Scored {
  ParserAction action;
  double score;
  const std::vector<FeatureId>* ids;
};

template <typename ScoreFn, typename ToIds>
std::vector<Scored> score_all(const EasyFirstState& st, PairCache& cache, ScoreFn&& score, ToIds&& to_ids) {
  std::vector<Scored> out;
  const int n_pairs = static_cast<int>(st.pending().size()) - 1;
  for (int i = 0; i < n_pairs; ++i) {
    const auto& ids = cache.get(st, i, to_ids);
    out.push_back({st.make_action(ActionKind::AttachRight, i), score(ids, 1), &ids});
    if (st.pending()[static_cast<std::size_t>(i)] != 0) {
      out.push_back({st.make_action(ActionKind::AttachLeft, i), score(ids, 0), &ids});
    }
  }
  return out;
}

// First maximum in tie-break order.
std::size_t argmax(const std::vector<Scored>& cands) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].score > cands[best].score) best = i;
  }
  return best;
}

void require_kind(const ParserModel& pm, ParserKind kind) {
  if (!pm.trained()) throw std::logic_error("parser model is untrained");
  if (pm.kind() != kind) {
    throw std::logic_error("expected a " + std::string(to_string(kind)) + " model, got " +
                           std::string(to_string(pm.kind())));
  }
}

}  // namespace

EasyFirstOutput easy_first_parse(const ParserModel& pm, const Sentence& sentence) {
  require_kind(pm, ParserKind::EasyFirst);
  const Sentence norm = pm.normalize(sentence);
  EasyFirstState st(norm);
  PairCache cache(norm.size());
  const MulticlassWeights& w = pm.weights();
  auto to_ids = [&w](const std::vector<std::string>& names, std::vector<FeatureId>& ids) { w.lookup(names, ids); };
  auto score = [&w](const std::vector<FeatureId>& ids, std::size_t cls) { return w.score(ids, cls); };

  ActionTrace trace;
  trace.sentence_length = static_cast<int>(sentence.size());
  while (!st.done()) {
    const auto cands = score_all(st, cache, score, to_ids);
    const std::size_t best = argmax(cands);
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (i != best) second = std::max(second, cands[i].score);
    }
    if (cands.size() == 1) second = cands[best].score - kNoRivalMargin;
    TraceStep step;
    step.action = cands[best].action;
    step.best_score = cands[best].score;
    step.second_best_score = second;
    step.n_pending = st.n_parentless();
    step.state_features = extract_easy_first_state_features(st, step.action);
    st.apply(step.action);
    cache.after_apply(step.action.position);
    trace.steps.push_back(std::move(step));
  }
  return {DepTree(sentence, st.heads()), std::move(trace)};
}

ParserModel train_easy_first(const std::vector<DepTree>& gold, const TrainOptions& options) {
  const auto vocab = build_vocabulary(gold);
  std::vector<Sentence> sentences;
  std::vector<std::vector<int>> child_counts;
  sentences.reserve(gold.size());
  for (const auto& t : gold) {
    std::vector<int> counts(t.size() + 1, 0);
    for (int h : t.heads()) ++counts[static_cast<std::size_t>(h)];
    child_counts.push_back(std::move(counts));
  }
  ParserModel shell(ParserKind::EasyFirst, MulticlassWeights(2), vocab, {}, options);
  for (const auto& t : gold) sentences.push_back(shell.normalize(t.sentence()));

  Perceptron p = train_perceptron(gold.size(), 2, options.epochs, options.seed, [&](std::size_t i, Perceptron& pc) {
    const auto& gold_heads = gold[i].heads();
    EasyFirstState st(sentences[i]);
    PairCache cache(sentences[i].size());
    auto to_ids = [&pc](const std::vector<std::string>& names, std::vector<FeatureId>& ids) { pc.intern(names, ids); };
    auto score = [&pc](const std::vector<FeatureId>& ids, std::size_t cls) { return pc.score(ids, cls); };
    while (!st.done()) {
      const auto cands = score_all(st, cache, score, to_ids);
      const std::size_t best = argmax(cands);
      if (easy_first_action_valid(st, cands[best].action, gold_heads, child_counts[i])) {
        st.apply(cands[best].action);
        cache.after_apply(cands[best].action.position);
        continue;
      }
      std::size_t good = cands.size();
      for (std::size_t c = 0; c < cands.size(); ++c) {
        if (!easy_first_action_valid(st, cands[c].action, gold_heads, child_counts[i])) continue;
        if (good == cands.size() || cands[c].score > cands[good].score) good = c;
      }
      if (good == cands.size()) break;  // gold tree unreachable (non-projective)
      pc.update(*cands[good].ids, class_of(cands[good].action.kind), 1.0);
      pc.update(*cands[best].ids, class_of(cands[best].action.kind), -1.0);
      st.apply(cands[good].action);
      cache.after_apply(cands[good].action.position);
    }
  });
  return ParserModel(ParserKind::EasyFirst, p.averaged(), vocab, corpus_fingerprints(gold), options);
}

}  // namespace pbp

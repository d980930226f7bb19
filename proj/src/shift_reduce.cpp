#include <algorithm>
#include <stdexcept>

#include "pbp/features.hpp"
#include "pbp/parser_model.hpp"

namespace pbp {

namespace {

const std::vector<std::string>& class_tags() {
  static const std::vector<std::string> kTags{"SH", "LA", "RA"};
  return kTags;
}

std::size_t class_of(ActionKind kind) {
  switch (kind) {
    case ActionKind::Shift: return 0;
    case ActionKind::LeftArc: return 1;
    default: return 2;
  }
}

// Arc-standard configuration: stack (root at the bottom) and buffer position.
class ArcStandardState {
 public:
  explicit ArcStandardState(std::size_t n)
      : n_(static_cast<int>(n)), stack_{0}, heads_(n + 1, -1), leftmost_(n + 1, -1), rightmost_(n + 1, -1),
        n_children_(n + 1, 0) {}

  bool done() const { return next_ > n_ && stack_.size() == 1; }
  int s(std::size_t depth) const { return depth < stack_.size() ? stack_[stack_.size() - 1 - depth] : -1; }
  int b(int offset) const { return next_ + offset <= n_ ? next_ + offset : -1; }
  int leftmost(int node) const { return node < 0 ? -1 : leftmost_[static_cast<std::size_t>(node)]; }
  int rightmost(int node) const { return node < 0 ? -1 : rightmost_[static_cast<std::size_t>(node)]; }
  int n_children(int node) const { return n_children_[static_cast<std::size_t>(node)]; }
  std::vector<int> heads() const { return {heads_.begin() + 1, heads_.end()}; }

  bool is_legal(ActionKind k) const {
    switch (k) {
      case ActionKind::Shift: return next_ <= n_;
      case ActionKind::LeftArc: return stack_.size() >= 2 && s(1) != 0;
      case ActionKind::RightArc: return stack_.size() >= 2;
      default: return false;
    }
  }

  ParserAction make(ActionKind k) const {
    ParserAction a;
    a.kind = k;
    if (k == ActionKind::LeftArc) a.produced_edge = std::pair{s(0), s(1)};
    if (k == ActionKind::RightArc) a.produced_edge = std::pair{s(1), s(0)};
    return a;
  }

  void apply(ActionKind k) {
    if (!is_legal(k)) throw std::logic_error("illegal arc-standard transition");
    if (k == ActionKind::Shift) {
      stack_.push_back(next_++);
      return;
    }
    const int top = s(0), below = s(1);
    const int h = k == ActionKind::LeftArc ? top : below;
    const int d = k == ActionKind::LeftArc ? below : top;
    heads_[static_cast<std::size_t>(d)] = h;
    auto& lm = leftmost_[static_cast<std::size_t>(h)];
    auto& rm = rightmost_[static_cast<std::size_t>(h)];
    if (lm < 0 || d < lm) lm = d;
    if (rm < 0 || d > rm) rm = d;
    ++n_children_[static_cast<std::size_t>(h)];
    stack_.pop_back();
    stack_.back() = h;
  }

 private:
  int n_;
  int next_ = 1;
  std::vector<int> stack_;
  std::vector<int> heads_, leftmost_, rightmost_, n_children_;
};

void feature_names(const Sentence& s, const ArcStandardState& st, std::vector<std::string>& out) {
  const int s0 = st.s(0), s1 = st.s(1), s2 = st.s(2), b0 = st.b(0), b1 = st.b(1), b2 = st.b(2);
  const std::string& s0p = pos_at(s, s0);
  const std::string& s1p = pos_at(s, s1);
  const std::string& b0p = pos_at(s, b0);
  const std::string& s0w = form_at(s, s0);
  const std::string& s1w = form_at(s, s1);
  const std::string& b0w = form_at(s, b0);
  const std::string& s0lc = pos_at(s, st.leftmost(s0));
  const std::string& s0rc = pos_at(s, st.rightmost(s0));
  const std::string& s1lc = pos_at(s, st.leftmost(s1));
  const std::string& s1rc = pos_at(s, st.rightmost(s1));
  const int dist = s0 >= 0 && s1 >= 0 ? s0 - s1 : 0;

  out.push_back(feat("bias"));
  out.push_back(feat("s0p", s0p));
  out.push_back(feat("s0w", s0w));
  out.push_back(feat("s0wp", s0w, s0p));
  out.push_back(feat("s1p", s1p));
  out.push_back(feat("s1w", s1w));
  out.push_back(feat("s1wp", s1w, s1p));
  out.push_back(feat("b0p", b0p));
  out.push_back(feat("b0w", b0w));
  out.push_back(feat("b0wp", b0w, b0p));
  out.push_back(feat("b1p", pos_at(s, b1)));
  out.push_back(feat("s0p_s1p", s0p, s1p));
  out.push_back(feat("s0w_s1w", s0w, s1w));
  out.push_back(feat("s0p_s1w", s0p, s1w));
  out.push_back(feat("s0w_s1p", s0w, s1p));
  out.push_back(feat("s0p_b0p", s0p, b0p));
  out.push_back(feat("s0w_b0w", s0w, b0w));
  out.push_back(feat("s0p_b0w", s0p, b0w));
  out.push_back(feat("s1p_s0p_b0p", s1p, s0p, b0p));
  out.push_back(feat("s0p_b0p_b1p", s0p, b0p, pos_at(s, b1)));
  out.push_back(feat("b0p_b1p_b2p", b0p, pos_at(s, b1), pos_at(s, b2)));
  out.push_back(feat("s2p_s1p_s0p", pos_at(s, s2), s1p, s0p));
  out.push_back(feat("s0p_lc_rc", s0p, s0lc, s0rc));
  out.push_back(feat("s1p_lc_rc", s1p, s1lc, s1rc));
  out.push_back(feat("s1p_s0p_s1rc", s1p, s0p, s1rc));
  out.push_back(feat("s1p_s0p_s0lc", s1p, s0p, s0lc));
  out.push_back(feat("s1p_s0p_s0rc", s1p, s0p, s0rc));
  out.push_back(feat("s1w_s0w_s0rcw", s1w, s0w, form_at(s, st.rightmost(s0))));
  out.push_back(feat("dist_s1p_s0p", distance_bin(dist), s1p, s0p));
}

void require_sr(const ParserModel& pm) {
  if (!pm.trained()) throw std::logic_error("parser model is untrained");
  if (pm.kind() != ParserKind::ShiftReduce) throw std::logic_error("expected a SHIFT_REDUCE model");
}

constexpr ActionKind kOrder[] = {ActionKind::Shift, ActionKind::LeftArc, ActionKind::RightArc};

ActionKind oracle_action(const ArcStandardState& st, const std::vector<int>& gold_heads,
                         const std::vector<int>& gold_child_count) {
  const int s0 = st.s(0), s1 = st.s(1);
  if (s1 > 0 && gold_heads[static_cast<std::size_t>(s1 - 1)] == s0) return ActionKind::LeftArc;
  if (s1 >= 0 && s0 > 0 && gold_heads[static_cast<std::size_t>(s0 - 1)] == s1 &&
      st.n_children(s0) == gold_child_count[static_cast<std::size_t>(s0)]) {
    return ActionKind::RightArc;
  }
  return ActionKind::Shift;
}

std::vector<int> child_counts(const DepTree& t) {
  std::vector<int> counts(t.size() + 1, 0);
  for (int h : t.heads()) ++counts[static_cast<std::size_t>(h)];
  return counts;
}

}  // namespace

std::vector<ParserAction> arc_standard_oracle(const DepTree& gold) {
  ArcStandardState st(gold.size());
  const auto counts = child_counts(gold);
  std::vector<ParserAction> out;
  while (!st.done()) {
    ActionKind k = oracle_action(st, gold.heads(), counts);
    if (!st.is_legal(k)) throw std::logic_error("arc-standard oracle stuck (non-projective tree?)");
    out.push_back(st.make(k));
    st.apply(k);
  }
  return out;
}

std::vector<int> replay_arc_standard(std::size_t n_tokens, const std::vector<ParserAction>& transitions) {
  ArcStandardState st(n_tokens);
  for (const auto& t : transitions) st.apply(t.kind);
  if (!st.done()) throw std::logic_error("transition sequence does not reach a terminal configuration");
  return st.heads();
}

ShiftReduceOutput shift_reduce_parse(const ParserModel& pm, const Sentence& sentence) {
  require_sr(pm);
  const Sentence norm = pm.normalize(sentence);
  ArcStandardState st(norm.size());
  std::vector<std::string> names;
  std::vector<FeatureId> ids;
  std::vector<ParserAction> transitions;
  while (!st.done()) {
    names.clear();
    feature_names(norm, st, names);
    pm.weights().lookup(names, ids);
    ActionKind best = ActionKind::Shift;
    bool have = false;
    double best_score = 0.0;
    for (ActionKind k : kOrder) {
      if (!st.is_legal(k)) continue;
      const double sc = pm.weights().score(ids, class_of(k));
      if (!have || sc > best_score) {
        best = k;
        best_score = sc;
        have = true;
      }
    }
    transitions.push_back(st.make(best));
    st.apply(best);
  }
  return {DepTree(sentence, st.heads()), std::move(transitions)};
}

ParserModel train_shift_reduce(const std::vector<DepTree>& gold_in, const TrainOptions& options) {
  std::vector<DepTree> gold;
  gold.reserve(gold_in.size());
  for (const auto& t : gold_in) gold.push_back(is_projective(t) ? t : projectivize(t));
  const auto vocab = build_vocabulary(gold);
  ParserModel shell(ParserKind::ShiftReduce, MulticlassWeights(3), vocab, {}, options);
  std::vector<Sentence> sentences;
  std::vector<std::vector<int>> counts;
  for (const auto& t : gold) {
    sentences.push_back(shell.normalize(t.sentence()));
    counts.push_back(child_counts(t));
  }
  Perceptron p = train_perceptron(gold.size(), 3, options.epochs, options.seed, [&](std::size_t i, Perceptron& pc) {
    ArcStandardState st(sentences[i].size());
    std::vector<std::string> names;
    std::vector<FeatureId> ids;
    while (!st.done()) {
      names.clear();
      feature_names(sentences[i], st, names);
      pc.intern(names, ids);
      const ActionKind target = oracle_action(st, gold[i].heads(), counts[i]);
      ActionKind best = target;
      bool have = false;
      double best_score = 0.0;
      for (ActionKind k : kOrder) {
        if (!st.is_legal(k)) continue;
        const double sc = pc.score(ids, class_of(k));
        if (!have || sc > best_score) {
          best = k;
          best_score = sc;
          have = true;
        }
      }
      if (best != target) {
        pc.update(ids, class_of(target), 1.0);
        pc.update(ids, class_of(best), -1.0);
      }
      st.apply(target);
    }
  });
  return ParserModel(ParserKind::ShiftReduce, p.averaged(), vocab, corpus_fingerprints(gold_in), options);
}

const std::vector<std::string>& shift_reduce_class_tags() { return class_tags(); }

}  // namespace pbp

#pragma once

#include <string>
#include <vector>

#include "pbp/parser_types.hpp"
#include "pbp/treebank.hpp"

namespace pbp {

// Pending-list state of the easy-first parser. pending()[0] is the root (0);
// every action attaches one of two adjacent pending items to the other.
class EasyFirstState {
 public:
  explicit EasyFirstState(const Sentence& sentence);

  const Sentence& sentence() const { return *sentence_; }
  const std::vector<int>& pending() const { return pending_; }
  bool done() const { return pending_.size() == 1; }
  int n_parentless() const { return static_cast<int>(pending_.size()) - 1; }

  int head(int token) const { return heads_[static_cast<std::size_t>(token)]; }
  std::vector<int> heads() const { return {heads_.begin() + 1, heads_.end()}; }
  int leftmost_child(int node) const { return leftmost_[static_cast<std::size_t>(node)]; }
  int rightmost_child(int node) const { return rightmost_[static_cast<std::size_t>(node)]; }
  int n_children(int node) const { return n_children_[static_cast<std::size_t>(node)]; }
  int span_length(int node) const {
    return span_hi_[static_cast<std::size_t>(node)] - span_lo_[static_cast<std::size_t>(node)] + 1;
  }

  // Action on the pair (pending[position], pending[position+1]), with its produced edge filled in.
  ParserAction make_action(ActionKind kind, int position) const;
  bool is_legal(const ParserAction& action) const;
  // Legal actions in tie-break order: position ascending, ATTACH_RIGHT before ATTACH_LEFT.
  std::vector<ParserAction> legal_actions() const;
  void apply(const ParserAction& action);

 private:
  const Sentence* sentence_;
  std::vector<int> pending_;
  std::vector<int> heads_;  // indexed by node 0..n, -1 = unattached
  std::vector<int> leftmost_, rightmost_, n_children_, span_lo_, span_hi_;
};

// Templates over the pair at `position` and two pending neighbours on each side,
// without the action conjunction. Appended to out.
void easy_first_pair_feature_names(const EasyFirstState& state, int position, std::vector<std::string>& out);

// The parser's scoring features for `action`: pair templates conjoined with the
// action direction ("L~" / "R~").
FeatureVector extract_easy_first_state_features(const EasyFirstState& state, const ParserAction& action);

// Class tags used for the action conjunction; index 0 = ATTACH_LEFT, 1 = ATTACH_RIGHT.
const std::vector<std::string>& easy_first_class_tags();

// True iff the action's edge is a gold edge whose dependent already has all its gold children.
bool easy_first_action_valid(const EasyFirstState& state, const ParserAction& action,
                             const std::vector<int>& gold_heads, const std::vector<int>& gold_child_count);

}  // namespace pbp

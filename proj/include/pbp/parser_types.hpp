#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pbp/linear_model.hpp"

namespace pbp {

enum class ParserKind { EasyFirst, ShiftReduce, Mst1 };

std::string_view to_string(ParserKind kind);
ParserKind parse_parser_kind(std::string_view name);  // throws std::invalid_argument

enum class ActionKind { AttachLeft, AttachRight, Shift, LeftArc, RightArc };

std::string_view to_string(ActionKind kind);

struct ParserAction {
  ActionKind kind = ActionKind::Shift;
  int position = 0;  // index into the pending list (easy-first) or 0 (arc-standard)
  std::optional<std::pair<int, int>> produced_edge;  // (head, dependent)

  bool attaches() const { return produced_edge.has_value(); }
  bool operator==(const ParserAction&) const = default;
};

// Second-best score recorded when only one action is legal.
inline constexpr double kNoRivalMargin = 1e6;

struct TraceStep {
  ParserAction action;
  double best_score = 0.0;
  double second_best_score = 0.0;
  int n_pending = 0;  // parentless tokens before the action (root excluded)
  FeatureVector state_features;  // the parser's own scoring features for the applied action
};

struct ActionTrace {
  int sentence_length = 0;
  std::vector<TraceStep> steps;

  // Index of the step that attached `token`, or -1.
  int attaching_step(int token) const;
};

}  // namespace pbp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pbp/eisner.hpp"
#include "pbp/linear_model.hpp"
#include "pbp/parser_types.hpp"
#include "pbp/perceptron.hpp"
#include "pbp/treebank.hpp"

namespace pbp {

struct TrainOptions {
  int epochs = 10;
  std::uint64_t seed = 1;
};

// A trained parser: weights, the lexicon seen in training (rarer forms parse as
// <UNK>), and fingerprints of its training sentences.
class ParserModel {
 public:
  ParserModel() = default;  // untrained
  ParserModel(ParserKind kind, MulticlassWeights weights, std::unordered_set<std::string> vocabulary,
              std::vector<std::uint64_t> train_fingerprints, TrainOptions options);

  bool trained() const { return trained_; }
  ParserKind kind() const { return kind_; }
  const MulticlassWeights& weights() const { return weights_; }
  const std::unordered_set<std::string>& vocabulary() const { return vocabulary_; }
  // Sorted ascending.
  const std::vector<std::uint64_t>& train_fingerprints() const { return fingerprints_; }
  const TrainOptions& options() const { return options_; }

  // Forms outside the vocabulary replaced by <UNK>.
  Sentence normalize(const Sentence& s) const;

  LinearModel to_linear_model() const;
  // Throws ModelMismatchError for a wrong kind or feature template version.
  static ParserModel from_linear_model(const LinearModel& model);

 private:
  bool trained_ = false;
  ParserKind kind_ = ParserKind::EasyFirst;
  MulticlassWeights weights_;
  std::unordered_set<std::string> vocabulary_;
  std::vector<std::uint64_t> fingerprints_;
  TrainOptions options_;
};

std::string_view feature_template_version(ParserKind kind);

void save_parser_model(const ParserModel& model, const std::string& path);
ParserModel load_parser_model(const std::string& path);

// Forms occurring at least twice in the training trees.
std::unordered_set<std::string> build_vocabulary(const std::vector<DepTree>& gold);
std::vector<std::uint64_t> corpus_fingerprints(const std::vector<DepTree>& trees);

struct EasyFirstOutput {
  DepTree tree;
  ActionTrace trace;
};

struct ShiftReduceOutput {
  DepTree tree;
  std::vector<ParserAction> transitions;
};

// All parse functions throw std::logic_error for an untrained model or a model of another kind.
EasyFirstOutput easy_first_parse(const ParserModel& pm, const Sentence& sentence);
ShiftReduceOutput shift_reduce_parse(const ParserModel& pm, const Sentence& sentence);
DepTree eisner_parse(const ParserModel& pm, const Sentence& sentence);

ParserModel train_easy_first(const std::vector<DepTree>& gold, const TrainOptions& options = {});
ParserModel train_shift_reduce(const std::vector<DepTree>& gold, const TrainOptions& options = {});
ParserModel train_mst1(const std::vector<DepTree>& gold, const TrainOptions& options = {});
ParserModel train_parser(ParserKind kind, const std::vector<DepTree>& gold, const TrainOptions& options = {});

// Class tags of the arc-standard model: SHIFT, LEFT_ARC, RIGHT_ARC.
const std::vector<std::string>& shift_reduce_class_tags();

// Canonical arc-standard transition sequence for a projective tree.
std::vector<ParserAction> arc_standard_oracle(const DepTree& gold);
// Applies transitions from the initial configuration; throws std::logic_error on an illegal one.
std::vector<int> replay_arc_standard(std::size_t n_tokens, const std::vector<ParserAction>& transitions);

// Arc scores of a sentence under an MST1 model (sentence already normalized).
ArcScores mst_arc_scores(const MulticlassWeights& weights, const Sentence& sentence);

struct ParseOutput {
  DepTree tree;
  std::optional<ActionTrace> trace;  // easy-first only
};

ParseOutput parse(const ParserModel& pm, const Sentence& sentence);

}  // namespace pbp

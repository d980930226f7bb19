#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pbp/maxent.hpp"
#include "pbp/parser_model.hpp"

namespace pbp {

// A full parse with riskiness scores; 1 = certainly wrong, 0 = certainly right.
struct RiskAnnotatedTree {
  DepTree tree;
  // One entry per token. Absent when the risks come from an action-level model.
  std::optional<std::vector<double>> edge_risks;
  // One entry per easy-first action, in trace order.
  std::vector<double> action_risks;
};

struct EnsembleConfig {
  std::vector<std::shared_ptr<const ParserModel>> members;
  // Index of the member whose tree is reported; defaults to the first easy-first member.
  std::optional<std::size_t> primary;

  std::size_t primary_index() const;
};

// Risk 0 where every member predicts the same head, 1 elsewhere.
// Throws std::invalid_argument for fewer than two members, std::logic_error for an untrained one.
RiskAnnotatedTree ensemble_risk(const EnsembleConfig& cfg, const Sentence& sentence);

// Sentence length, parentless tokens, best score, second-best score, margin.
// Zero values are not stored (FeatureVector drops them), so size() can be below 5.
FeatureVector features_action_process(const ActionTrace& trace, std::size_t step);
FeatureVector features_action_state(const TraceStep& step);
// Throws std::invalid_argument if no step attached the token.
FeatureVector features_edge_state(const ActionTrace& trace, int token);
FeatureVector features_edge_factored(const Sentence& sentence, const DepTree& predicted, int token);
FeatureVector features_edge_higher(const Sentence& sentence, const DepTree& predicted, int token);

enum class ExampleKind { Action, Edge };

struct RiskExample {
  FeatureVector features;
  RiskLabel label = RiskLabel::Safe;
  ExampleKind kind = ExampleKind::Edge;
  std::size_t sentence = 0;
  int index = 0;  // trace step (ACTION) or token (EDGE)
};

ExampleKind example_kind(FeatureSet fs);

// Examples from parses that already exist (parsed[i] is the parse of gold[i]).
// Trace-based sets need easy-first traces. Throws DataError on misalignment.
std::vector<RiskExample> risk_examples_from_parses(const std::vector<ParseOutput>& parsed,
                                                   const std::vector<DepTree>& gold, FeatureSet fs);

// Parses risk_train and labels every decision. Throws DataError when more than
// max_overlap risk-train sentences were in the parser's training data.
std::vector<RiskExample> generate_risk_examples(const ParserModel& parser, const std::vector<DepTree>& risk_train,
                                                FeatureSet fs, std::size_t max_overlap = 0);

// Number of risk_train sentences whose fingerprint the parser saw in training.
std::size_t count_overlap(const ParserModel& parser, const std::vector<DepTree>& risk_train);

std::vector<LabeledFeatures> to_labeled(const std::vector<RiskExample>& examples);

// "label<TAB>name:value name:value ..." per example.
void write_risk_examples(const std::vector<RiskExample>& examples, std::ostream& out);
std::vector<LabeledFeatures> read_risk_examples(std::istream& in);

enum class RiskUse { Pruning, Selection };

// Edge sets fill edge_risks; action sets fill action_risks only. Requesting
// risks for pruning from an action-set model throws ModelMismatchError.
RiskAnnotatedTree score_risks(const RiskModel& rm, const ParseOutput& parsed, RiskUse use = RiskUse::Pruning);

// CoNLL-X with "risk=<value>" in FEATS and an optional "# action_risks=..." comment line.
void write_risk_annotated(const std::vector<RiskAnnotatedTree>& trees, std::ostream& out);
void write_risk_annotated(const std::vector<RiskAnnotatedTree>& trees, const std::string& path);
std::vector<RiskAnnotatedTree> read_risk_annotated(std::istream& in);
std::vector<RiskAnnotatedTree> read_risk_annotated(const std::string& path);

}  // namespace pbp

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pbp {

inline constexpr int kRootIndex = 0;
inline constexpr int kAbstained = -1;

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string pos;
  std::string fine_pos;

  bool operator==(const Token&) const = default;
};

class Sentence {
 public:
  Sentence() = default;
  // Throws StructureError unless indices are exactly 1..n and forms/tags are nonempty.
  explicit Sentence(std::vector<Token> tokens);

  // Builds tokens 1..n from parallel form/tag lists (fine tag = coarse tag).
  static Sentence from_words(const std::vector<std::string>& forms,
                             const std::vector<std::string>& tags);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<Token>& tokens() const { return tokens_; }
  // 1-based access; token(0) is invalid.
  const Token& token(int index) const { return tokens_[static_cast<std::size_t>(index - 1)]; }

  bool operator==(const Sentence&) const = default;

 private:
  std::vector<Token> tokens_;
};

// A complete head assignment forming a single tree rooted at 0.
class DepTree {
 public:
  DepTree() = default;
  // heads[i] is the head of token i+1. Throws StructureError on any tree violation.
  DepTree(Sentence sentence, std::vector<int> heads);

  const Sentence& sentence() const { return sentence_; }
  const std::vector<int>& heads() const { return heads_; }
  int head(int token) const { return heads_[static_cast<std::size_t>(token - 1)]; }
  std::size_t size() const { return heads_.size(); }

  bool operator==(const DepTree&) const = default;

 private:
  Sentence sentence_;
  std::vector<int> heads_;
};

// Head assignment where any entry may be kAbstained. Assigned arcs must be acyclic.
class PartialDepTree {
 public:
  PartialDepTree() = default;
  PartialDepTree(Sentence sentence, std::vector<int> heads);
  PartialDepTree(const DepTree& tree);  // NOLINT: a full tree is a partial tree

  const Sentence& sentence() const { return sentence_; }
  const std::vector<int>& heads() const { return heads_; }
  int head(int token) const { return heads_[static_cast<std::size_t>(token - 1)]; }
  bool is_assigned(int token) const { return head(token) != kAbstained; }
  std::size_t size() const { return heads_.size(); }
  std::size_t n_assigned() const;

  bool operator==(const PartialDepTree&) const = default;

 private:
  Sentence sentence_;
  std::vector<int> heads_;
};

// Returns an explanation if heads do not form a tree over n tokens, empty string otherwise.
std::string tree_violation(std::span<const int> heads);

struct CorpusSplit {
  std::vector<DepTree> parser_train;
  std::vector<DepTree> risk_train;
  std::vector<DepTree> dev;
  std::vector<DepTree> test;
};

// Children of every node 0..n, each list sorted ascending.
std::vector<std::vector<int>> children_of(std::span<const int> heads);

bool is_projective(const DepTree& tree);
bool is_projective(std::span<const int> heads);

// Lifts non-projective arcs to the grandparent until the tree is projective.
DepTree projectivize(const DepTree& tree);

// Deterministic synthetic corpus: projective trees over a head-outward grammar.
std::vector<DepTree> generate_treebank(std::uint64_t grammar_seed, std::size_t n_sentences,
                                       std::size_t max_len);

// fractions = {parser_train, risk_train, dev, test}; must sum to 1 within 1e-9.
CorpusSplit split_corpus(const std::vector<DepTree>& trees, const std::vector<double>& fractions,
                         std::uint64_t seed);

using ParseFn = std::function<DepTree(const Sentence&)>;
using ParserTrainerFn = std::function<ParseFn(std::span<const DepTree>)>;

// Each contiguous fold is parsed by a parser trained on the remaining k-1 folds.
std::vector<std::pair<DepTree, DepTree>> jackknife_parse(const std::vector<DepTree>& trees,
                                                         std::size_t k_folds,
                                                         const ParserTrainerFn& trainer);

// Content hash of a sentence (forms and tags); used to detect train/risk overlap.
std::uint64_t sentence_fingerprint(const Sentence& sentence);

// Deterministic permutation of 0..n-1 (Fisher-Yates over mt19937_64).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace pbp

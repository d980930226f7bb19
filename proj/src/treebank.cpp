#include "pbp/treebank.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pbp/error.hpp"

namespace pbp {

Sentence::Sentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const Token& t = tokens_[i];
    if (t.index != static_cast<int>(i + 1)) {
      throw StructureError("token indices must be 1..n without gaps (found " +
                           std::to_string(t.index) + " at position " + std::to_string(i + 1) + ")");
    }
    if (t.form.empty() || t.pos.empty()) {
      throw StructureError("token " + std::to_string(t.index) + " has an empty form or POS tag");
    }
  }
}

Sentence Sentence::from_words(const std::vector<std::string>& forms,
                              const std::vector<std::string>& tags) {
  if (forms.size() != tags.size()) throw StructureError("forms and tags differ in length");
  std::vector<Token> tokens;
  tokens.reserve(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    tokens.push_back(Token{static_cast<int>(i + 1), forms[i], tags[i], tags[i]});
  }
  return Sentence(std::move(tokens));
}

std::string tree_violation(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int d = 1; d <= n; ++d) {
    const int h = heads[static_cast<std::size_t>(d - 1)];
    if (h < 0 || h > n) return "token " + std::to_string(d) + " has out-of-range head " + std::to_string(h);
    if (h == d) return "token " + std::to_string(d) + " is its own head";
  }
  // 0 = unvisited, 1 = on current path, 2 = known to reach the root
  std::vector<char> state(static_cast<std::size_t>(n + 1), 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = heads[static_cast<std::size_t>(cur - 1)];
    }
    if (state[static_cast<std::size_t>(cur)] == 1) {
      return "cycle through token " + std::to_string(cur);
    }
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
  return {};
}

DepTree::DepTree(Sentence sentence, std::vector<int> heads)
    : sentence_(std::move(sentence)), heads_(std::move(heads)) {
  if (heads_.size() != sentence_.size()) {
    throw StructureError("head count " + std::to_string(heads_.size()) + " does not match " +
                         std::to_string(sentence_.size()) + " tokens");
  }
  if (auto why = tree_violation(heads_); !why.empty()) throw StructureError("not a tree: " + why);
}

PartialDepTree::PartialDepTree(Sentence sentence, std::vector<int> heads)
    : sentence_(std::move(sentence)), heads_(std::move(heads)) {
  const int n = static_cast<int>(sentence_.size());
  if (heads_.size() != sentence_.size()) {
    throw StructureError("head count does not match token count");
  }
  for (int d = 1; d <= n; ++d) {
    const int h = heads_[static_cast<std::size_t>(d - 1)];
    if (h == kAbstained) continue;
    if (h < 0 || h > n || h == d) {
      throw StructureError("token " + std::to_string(d) + " has invalid head " + std::to_string(h));
    }
  }
  // Abstained tokens act as fragment roots; walking up from any token must end at 0 or
  // an abstained token without revisiting a node.
  std::vector<char> state(static_cast<std::size_t>(n + 1), 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (cur != kAbstained && state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = heads_[static_cast<std::size_t>(cur - 1)];
    }
    if (cur != kAbstained && state[static_cast<std::size_t>(cur)] == 1) {
      throw StructureError("assigned arcs form a cycle through token " + std::to_string(cur));
    }
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
}

PartialDepTree::PartialDepTree(const DepTree& tree)
    : sentence_(tree.sentence()), heads_(tree.heads()) {}

std::size_t PartialDepTree::n_assigned() const {
  return static_cast<std::size_t>(
      std::count_if(heads_.begin(), heads_.end(), [](int h) { return h != kAbstained; }));
}

std::vector<std::vector<int>> children_of(std::span<const int> heads) {
  std::vector<std::vector<int>> kids(heads.size() + 1);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const int h = heads[i];
    if (h >= 0) kids[static_cast<std::size_t>(h)].push_back(static_cast<int>(i + 1));
  }
  return kids;
}

namespace {

bool descends_from(std::span<const int> heads, int node, int ancestor) {
  while (node != 0) {
    node = heads[static_cast<std::size_t>(node - 1)];
    if (node == ancestor) return true;
  }
  return ancestor == 0;
}

// Shortest arc whose span contains a non-descendant of its head; {0,0} if none.
std::pair<int, int> first_nonprojective_arc(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  std::pair<int, int> best{0, 0};
  int best_len = n + 2;
  for (int d = 1; d <= n; ++d) {
    const int h = heads[static_cast<std::size_t>(d - 1)];
    const int lo = std::min(h, d);
    const int hi = std::max(h, d);
    for (int k = lo + 1; k < hi; ++k) {
      if (!descends_from(heads, k, h)) {
        if (hi - lo < best_len) {
          best_len = hi - lo;
          best = {h, d};
        }
        break;
      }
    }
  }
  return best;
}

}  // namespace

bool is_projective(std::span<const int> heads) {
  return first_nonprojective_arc(heads).second == 0;
}

bool is_projective(const DepTree& tree) { return is_projective(tree.heads()); }

DepTree projectivize(const DepTree& tree) {
  std::vector<int> heads = tree.heads();
  for (;;) {
    auto [h, d] = first_nonprojective_arc(heads);
    if (d == 0) break;
    heads[static_cast<std::size_t>(d - 1)] = heads[static_cast<std::size_t>(h - 1)];
  }
  return DepTree(tree.sentence(), std::move(heads));
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

CorpusSplit split_corpus(const std::vector<DepTree>& trees, const std::vector<double>& fractions,
                         std::uint64_t seed) {
  if (fractions.size() != 4) throw std::invalid_argument("split needs exactly four fractions");
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw std::invalid_argument("split fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "split fractions sum to " << sum << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  const auto order = shuffled_indices(trees.size(), seed);
  const double n = static_cast<double>(trees.size());
  CorpusSplit split;
  std::vector<DepTree>* parts[4] = {&split.parser_train, &split.risk_train, &split.dev, &split.test};
  double cum = 0.0;
  std::size_t begin = 0;
  for (int p = 0; p < 4; ++p) {
    cum += fractions[static_cast<std::size_t>(p)];
    std::size_t end = p == 3 ? trees.size() : static_cast<std::size_t>(std::llround(cum * n));
    end = std::clamp(end, begin, trees.size());
    for (std::size_t i = begin; i < end; ++i) parts[p]->push_back(trees[order[i]]);
    begin = end;
  }
  return split;
}

std::vector<std::pair<DepTree, DepTree>> jackknife_parse(const std::vector<DepTree>& trees,
                                                         std::size_t k_folds,
                                                         const ParserTrainerFn& trainer) {
  if (k_folds < 2) throw std::invalid_argument("jackknifing needs at least 2 folds");
  if (trees.size() < k_folds) throw DataError("fewer trees than folds");
  const std::size_t n = trees.size();
  std::vector<std::pair<DepTree, DepTree>> out;
  out.reserve(n);
  for (std::size_t f = 0; f < k_folds; ++f) {
    const std::size_t lo = f * n / k_folds;
    const std::size_t hi = (f + 1) * n / k_folds;
    std::vector<DepTree> train;
    train.reserve(n - (hi - lo));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < lo || i >= hi) train.push_back(trees[i]);
    }
    ParseFn parse = trainer(train);
    for (std::size_t i = lo; i < hi; ++i) out.emplace_back(trees[i], parse(trees[i].sentence()));
  }
  return out;
}

std::uint64_t sentence_fingerprint(const Sentence& sentence) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const Token& t : sentence.tokens()) {
    mix(t.form);
    mix("\x1f");
    mix(t.pos);
    mix("\x1e");
  }
  return h;
}

}  // namespace pbp

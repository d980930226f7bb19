// Synthetic treebank: a head-outward generative grammar with lexicalized
// attachment preferences. Post-verbal prepositional phrases and clauses attach
// to any verb/noun on the right frontier of the tree built so far, so
// [Verb Noun Prep] configurations are genuinely ambiguous.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "pbp/error.hpp"
#include "pbp/treebank.hpp"

namespace pbp {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  // Index drawn proportionally to weights.
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (x < weights[i]) return i;
      x -= weights[i];
    }
    return weights.size() - 1;
  }

  double lognormal(double sigma) {
    // Box-Muller; fixed formula keeps output identical across standard libraries.
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return std::exp(sigma * z);
  }

 private:
  std::mt19937_64 engine_;
};

struct Word {
  std::string form;
  std::string fine;
  double affinity = 1.0;   // how strongly this word attracts PP attachments
  double p_object = 0.0;   // verbs: probability of a direct object
  double p_clause = 0.0;   // verbs: probability of a that-clause
  std::array<double, 9> prep_pref{};  // per-preposition attachment preference
};

// Zipf-distributed lexical class.
struct LexClass {
  std::string tag;
  std::vector<Word> words;
  std::vector<double> cdf;

  const Word& draw(Rng& rng) const {
    const double x = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    return words[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                                    static_cast<std::ptrdiff_t>(words.size()) - 1))];
  }
};

constexpr double kSiteNoise = 0.6;
// Exponent on site weights; larger values make attachments follow the lexicon more closely.
constexpr double kSharpness = 1.0;

struct Preposition {
  const char* form;
  double frequency;
  double verb_bias;  // prior share of attachments to a verb site
};

constexpr std::array<Preposition, 9> kPrepositions{{
    {"of", 0.26, 0.03},
    {"in", 0.20, 0.50},
    {"for", 0.10, 0.45},
    {"on", 0.08, 0.55},
    {"at", 0.07, 0.60},
    {"with", 0.07, 0.50},
    {"from", 0.07, 0.40},
    {"by", 0.08, 0.65},
    {"as", 0.07, 0.55},
}};

class Grammar {
 public:
  explicit Grammar(Rng& rng) {
    std::unordered_set<std::string> used{"of", "in", "for", "on", "at", "with", "from", "by",
                                         "as", "that", "the", "a", "this", "some", "every",
                                         "and", "or", "will", "can", "may", "must", "he",
                                         "she", "it", "they", "we", ".", "very", "not"};
    nouns_ = make_class(rng, used, "NN", 5000, 2, 3);
    verbs_ = make_class(rng, used, "VB", 1500, 2, 3);
    adjectives_ = make_class(rng, used, "JJ", 260, 2, 3);
    adverbs_ = make_class(rng, used, "RB", 70, 2, 3);
    for (auto& w : nouns_.words) {
      w.fine = rng.bernoulli(0.3) ? "NNS" : "NN";
      w.affinity = rng.lognormal(0.9);
      for (auto& p : w.prep_pref) p = rng.lognormal(1.5);
    }
    for (auto& w : verbs_.words) {
      w.fine = rng.bernoulli(0.5) ? "VBD" : "VBZ";
      w.affinity = rng.lognormal(0.9);
      for (auto& p : w.prep_pref) p = rng.lognormal(1.5);
      w.p_object = 0.25 + 0.7 * rng.uniform();
      w.p_clause = rng.bernoulli(0.25) ? 0.3 + 0.4 * rng.uniform() : 0.02;
    }
    for (const auto& p : kPrepositions) prep_weights_.push_back(p.frequency);
  }

  const LexClass& nouns() const { return nouns_; }
  const LexClass& verbs() const { return verbs_; }
  const LexClass& adjectives() const { return adjectives_; }
  const LexClass& adverbs() const { return adverbs_; }
  const std::vector<double>& prep_weights() const { return prep_weights_; }

 private:
  static std::string pseudo_word(Rng& rng, int min_syll, int max_syll) {
    static const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s",
                                    "t", "v", "z", "br", "st", "tr", "gl", "pl", "sh", "ch"};
    static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou", "ea"};
    static const char* kCodas[] = {"", "", "", "n", "r", "s", "t", "l", "m", "nd", "st"};
    const int n = min_syll + static_cast<int>(rng.below(static_cast<std::size_t>(max_syll - min_syll + 1)));
    std::string w;
    for (int i = 0; i < n; ++i) {
      w += kOnsets[rng.below(std::size(kOnsets))];
      w += kVowels[rng.below(std::size(kVowels))];
      if (i + 1 == n) w += kCodas[rng.below(std::size(kCodas))];
    }
    return w;
  }

  static LexClass make_class(Rng& rng, std::unordered_set<std::string>& used, const std::string& tag,
                             std::size_t size, int min_syll, int max_syll) {
    LexClass c;
    c.tag = tag;
    double cum = 0.0;
    while (c.words.size() < size) {
      std::string w = pseudo_word(rng, min_syll, max_syll);
      if (!used.insert(w).second) continue;
      Word word;
      word.form = std::move(w);
      word.fine = tag;
      c.words.push_back(std::move(word));
      cum += 1.0 / std::pow(static_cast<double>(c.words.size()), 1.05);
      c.cdf.push_back(cum);
    }
    return c;
  }

  LexClass nouns_, verbs_, adjectives_, adverbs_;
  std::vector<double> prep_weights_;
};

struct Node {
  std::string form;
  std::string pos;
  std::string fine;
  double affinity = 1.0;
  const Word* word = nullptr;
  std::vector<int> left;   // outermost first
  std::vector<int> right;  // closest first
  int parent = -1;
};

class TreeBuilder {
 public:
  TreeBuilder(const Grammar& g, Rng& rng, std::size_t budget) : g_(g), rng_(rng), budget_(budget) {}

  DepTree build() {
    const bool punct = budget_ >= 3 && rng_.bernoulli(0.85);
    if (punct) --budget_;
    const int root = clause(0);
    if (punct) attach_right(root, new_node(".", ".", ".", 1.0));
    return linearize(root);
  }

 private:
  int new_node(std::string form, std::string pos, std::string fine, double affinity) {
    nodes_.push_back(Node{std::move(form), std::move(pos), std::move(fine), affinity, nullptr, {}, {}, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  int new_word(const LexClass& c) {
    const Word& w = c.draw(rng_);
    const int id = new_node(w.form, c.tag, w.fine, w.affinity);
    nodes_[static_cast<std::size_t>(id)].word = &w;
    return id;
  }
  void attach_left(int head, int dep) {  // dep becomes the new outermost left dependent
    nodes_[static_cast<std::size_t>(dep)].parent = head;
    auto& l = nodes_[static_cast<std::size_t>(head)].left;
    l.insert(l.begin(), dep);
  }
  void attach_right(int head, int dep) {  // dep becomes the new outermost right dependent
    nodes_[static_cast<std::size_t>(dep)].parent = head;
    nodes_[static_cast<std::size_t>(head)].right.push_back(dep);
  }
  bool take(std::size_t n) {
    if (budget_ < n) return false;
    budget_ -= n;
    return true;
  }

  int noun_phrase() {
    // caller already paid for the head noun
    const int head = new_word(g_.nouns());
    if (rng_.bernoulli(0.12) && take(1)) attach_left(head, new_word(g_.nouns()));  // compound
    for (int i = 0; i < 2 && rng_.bernoulli(0.28) && take(1); ++i) {
      const int adj = new_word(g_.adjectives());
      if (rng_.bernoulli(0.12) && take(1)) attach_left(adj, new_node("very", "RB", "RB", 1.0));
      attach_left(head, adj);
    }
    if (rng_.bernoulli(0.65) && take(1)) {
      static const char* kDets[] = {"the", "the", "the", "a", "a", "this", "some", "every"};
      attach_left(head, new_node(kDets[rng_.below(std::size(kDets))], "DT", "DT", 1.0));
    }
    if (rng_.bernoulli(0.07) && budget_ >= 2) {
      take(2);
      const int cc = new_node(rng_.bernoulli(0.7) ? "and" : "or", "CC", "CC", 1.0);
      attach_right(head, cc);
      attach_right(head, new_word(g_.nouns()));
    }
    return head;
  }

  int subject() {
    if (rng_.bernoulli(0.3)) {
      static const char* kPron[] = {"he", "she", "it", "they", "we"};
      return new_node(kPron[rng_.below(std::size(kPron))], "PRP", "PRP", 1.0);
    }
    const int np = noun_phrase();
    if (rng_.bernoulli(0.25) && budget_ >= 2) {
      take(2);
      prepositional_phrase(np);
    }
    return np;
  }

  // Verbs and nouns reachable along the right edge of the subtree at `top`.
  std::vector<int> right_frontier(int top) const {
    std::vector<int> path;
    int cur = top;
    for (;;) {
      const auto& n = nodes_[static_cast<std::size_t>(cur)];
      if (n.pos == "VB" || n.pos == "NN") path.push_back(cur);
      if (n.right.empty()) break;
      cur = n.right.back();
    }
    return path;
  }

  bool has_child_tag(int node, const char* tag) const {
    for (int c : nodes_[static_cast<std::size_t>(node)].right) {
      if (nodes_[static_cast<std::size_t>(c)].pos == tag) return true;
    }
    return false;
  }

  // Chooses a frontier site for a post-verbal modifier. Sites further down the
  // frontier (closer to the attachment point) are preferred for nouns.
  int choose_site(int top, double verb_bias, int prep = -1) {
    const auto frontier = right_frontier(top);
    std::vector<double> weights;
    int nouns_seen = 0;
    for (auto it = frontier.rbegin(); it != frontier.rend(); ++it) {
      const Node& n = nodes_[static_cast<std::size_t>(*it)];
      double w;
      if (n.pos == "VB") {
        w = verb_bias * n.affinity;
        if (has_child_tag(*it, "IN")) w *= 0.45;
      } else {
        w = (1.0 - verb_bias) * n.affinity * std::pow(0.35, nouns_seen);
        if (has_child_tag(*it, "IN")) w *= 0.5;
        ++nouns_seen;
      }
      if (prep >= 0 && n.word) w *= n.word->prep_pref[static_cast<std::size_t>(prep)];
      weights.push_back(std::pow(w, kSharpness));
    }
    // some attachments ignore lexical preference entirely
    const std::size_t pick = rng_.bernoulli(kSiteNoise) ? rng_.below(weights.size()) : rng_.weighted(weights);
    return frontier[frontier.size() - 1 - pick];
  }

  // Frontier noun, preferring the lowest; -1 when there is none.
  int choose_noun_site(int top) {
    std::vector<int> nouns;
    std::vector<double> weights;
    for (int n : right_frontier(top)) {
      if (nodes_[static_cast<std::size_t>(n)].pos == "NN") nouns.push_back(n);
    }
    if (nouns.empty()) return -1;
    for (std::size_t i = 0; i < nouns.size(); ++i) weights.push_back(std::pow(0.4, static_cast<double>(nouns.size() - 1 - i)));
    return nouns[rng_.bernoulli(kSiteNoise) ? rng_.below(nouns.size()) : rng_.weighted(weights)];
  }

  int choose_verb_site(int top) {
    std::vector<int> verbs;
    for (int n : right_frontier(top)) {
      if (nodes_[static_cast<std::size_t>(n)].pos == "VB") verbs.push_back(n);
    }
    return verbs[rng_.below(verbs.size())];
  }

  void prepositional_phrase(int top) {
    const std::size_t p = rng_.weighted(g_.prep_weights());
    const Preposition& prep = kPrepositions[p];
    const int site = choose_site(top, prep.verb_bias, static_cast<int>(p));
    const int in = new_node(prep.form, "IN", "IN", 1.0);
    attach_right(in, noun_phrase());
    attach_right(site, in);
  }

  void coordinate(int first, int second) {
    attach_right(first, new_node(rng_.bernoulli(0.75) ? "and" : "or", "CC", "CC", 1.0));
    attach_right(first, second);
  }

  // Second conjunct of a verb phrase: verb, optional object and one PP.
  int predicate() {
    take(1);
    const int verb = new_word(g_.verbs());
    if (rng_.bernoulli(0.6) && take(1)) attach_right(verb, noun_phrase());
    if (rng_.bernoulli(0.5) && budget_ >= 2) {
      take(2);
      prepositional_phrase(verb);
    }
    return verb;
  }

  int clause(int depth) {
    const bool embedded = depth > 0;
    take(1);
    const Word& vw = g_.verbs().draw(rng_);
    const int verb = new_node(vw.form, "VB", vw.fine, vw.affinity);
    nodes_[static_cast<std::size_t>(verb)].word = &vw;
    if (rng_.bernoulli(embedded ? 0.95 : 0.85) && take(1)) attach_left(verb, subject());
    if (rng_.bernoulli(0.12) && take(1)) {
      static const char* kModals[] = {"will", "can", "may", "must"};
      // modal sits between subject and verb
      auto& l = nodes_[static_cast<std::size_t>(verb)].left;
      const int md = new_node(kModals[rng_.below(std::size(kModals))], "MD", "MD", 1.0);
      nodes_[static_cast<std::size_t>(md)].parent = verb;
      l.push_back(md);
    }
    if (rng_.bernoulli(0.1) && take(1)) {
      const int adv = new_word(g_.adverbs());
      nodes_[static_cast<std::size_t>(adv)].parent = verb;
      nodes_[static_cast<std::size_t>(verb)].left.push_back(adv);
    }
    if (rng_.bernoulli(vw.p_object) && take(1)) attach_right(verb, noun_phrase());
    const int max_pps = embedded ? 3 : 6;
    for (int i = 0; i < max_pps && rng_.bernoulli(i == 0 ? 0.85 : 0.65) && budget_ >= 2; ++i) {
      take(2);
      prepositional_phrase(verb);
    }
    if (depth < 2 && budget_ >= 3 && rng_.bernoulli(vw.p_clause + 0.2)) {
      take(1);
      const int site = choose_site(verb, 0.6);
      const int that = new_node("that", "IN", "IN", 1.0);
      attach_right(that, clause(depth + 1));
      attach_right(site, that);
    }
    if (rng_.bernoulli(0.2) && budget_ >= 2) {
      // "... and N": the conjunct may pair with any noun on the frontier
      const int site = choose_noun_site(verb);
      if (site >= 0) {
        take(2);
        coordinate(site, noun_phrase());
      }
    }
    if (!embedded && rng_.bernoulli(0.3) && budget_ >= 3) {
      take(1);
      const int cc = new_node(rng_.bernoulli(0.7) ? "and" : "but", "CC", "CC", 1.0);
      attach_right(verb, cc);
      attach_right(verb, predicate());
    }
    if (!embedded && rng_.bernoulli(0.1) && take(1)) attach_right(choose_verb_site(verb), new_word(g_.adverbs()));
    return verb;
  }

  DepTree linearize(int root) {
    std::vector<int> order;
    // iterative in-order: left deps, head, right deps
    struct Frame {
      int node;
      bool expanded;
    };
    std::vector<Frame> todo{{root, false}};
    while (!todo.empty()) {
      Frame f = todo.back();
      todo.pop_back();
      if (f.expanded) {
        order.push_back(f.node);
        continue;
      }
      const Node& n = nodes_[static_cast<std::size_t>(f.node)];
      for (auto it = n.right.rbegin(); it != n.right.rend(); ++it) todo.push_back({*it, false});
      todo.push_back({f.node, true});
      for (auto it = n.left.rbegin(); it != n.left.rend(); ++it) todo.push_back({*it, false});
    }
    std::vector<int> position(nodes_.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) position[static_cast<std::size_t>(order[i])] = static_cast<int>(i + 1);
    std::vector<Token> tokens;
    std::vector<int> heads;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Node& n = nodes_[static_cast<std::size_t>(order[i])];
      tokens.push_back(Token{static_cast<int>(i + 1), n.form, n.pos, n.fine});
      heads.push_back(n.parent < 0 ? 0 : position[static_cast<std::size_t>(n.parent)]);
    }
    return DepTree(Sentence(std::move(tokens)), std::move(heads));
  }

  const Grammar& g_;
  Rng& rng_;
  std::size_t budget_;
  std::vector<Node> nodes_;
};

}  // namespace

std::vector<DepTree> generate_treebank(std::uint64_t grammar_seed, std::size_t n_sentences,
                                       std::size_t max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  Rng lex_rng(grammar_seed ^ 0x9e3779b97f4a7c15ULL);
  const Grammar grammar(lex_rng);
  Rng rng(grammar_seed);
  std::vector<DepTree> out;
  out.reserve(n_sentences);
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < n_sentences) {
    // Duplicate sentences are redrawn so that corpus splits never share a sentence;
    // after many collisions (tiny max_len) a duplicate is accepted.
    for (int attempt = 0;; ++attempt) {
      const std::size_t budget = 1 + rng.below(max_len);
      TreeBuilder builder(grammar, rng, std::max<std::size_t>(budget, std::min<std::size_t>(max_len, 4)));
      DepTree tree = builder.build();
      if (seen.insert(sentence_fingerprint(tree.sentence())).second || attempt >= 200) {
        out.push_back(std::move(tree));
        break;
      }
    }
  }
  return out;
}

}  // namespace pbp

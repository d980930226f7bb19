#pragma once

#include <cstddef>
#include <vector>

namespace pbp {

// Arc scores for a sentence of n tokens plus the root: score(h, d) for h in 0..n, d in 1..n.
class ArcScores {
 public:
  explicit ArcScores(std::size_t n_tokens)
      : n_(n_tokens), s_((n_tokens + 1) * (n_tokens + 1), 0.0) {}

  std::size_t n_tokens() const { return n_; }
  double operator()(int head, int dep) const { return s_[idx(head, dep)]; }
  double& operator()(int head, int dep) { return s_[idx(head, dep)]; }

 private:
  std::size_t idx(int h, int d) const { return static_cast<std::size_t>(h) * (n_ + 1) + static_cast<std::size_t>(d); }
  std::size_t n_;
  std::vector<double> s_;
};

// Maximum-scoring projective head assignment (heads[i] = head of token i+1).
// Split points are scanned left to right and only strictly better candidates
// replace the incumbent, so ties resolve the same way on every run.
std::vector<int> eisner_decode(const ArcScores& scores);

// Sum of score(head(d), d) over tokens in index order.
double tree_score(const ArcScores& scores, const std::vector<int>& heads);

}  // namespace pbp

#include "pbp/eisner.hpp"

#include <limits>

namespace pbp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Chart over spans [s, t]; dir 0 = head on the left end, 1 = head on the right end.
struct Chart {
  explicit Chart(int n) : n(n), score(static_cast<std::size_t>(n * n * 2), kNegInf), split(score.size(), -1) {}
  double& at(int s, int t, int dir) { return score[static_cast<std::size_t>((s * n + t) * 2 + dir)]; }
  int& arg(int s, int t, int dir) { return split[static_cast<std::size_t>((s * n + t) * 2 + dir)]; }
  int n;
  std::vector<double> score;
  std::vector<int> split;
};

struct Decoder {
  explicit Decoder(int nodes) : complete(nodes), incomplete(nodes), heads(static_cast<std::size_t>(nodes - 1), 0) {}

  void backtrack_complete(int s, int t, int dir) {
    if (s == t) return;
    const int r = complete.arg(s, t, dir);
    if (dir == 0) {  // head s: I[s][r] then C[r][t]
      backtrack_incomplete(s, r, 0);
      backtrack_complete(r, t, 0);
    } else {  // head t: C[s][r] then I[r][t]
      backtrack_complete(s, r, 1);
      backtrack_incomplete(r, t, 1);
    }
  }

  void backtrack_incomplete(int s, int t, int dir) {
    const int r = incomplete.arg(s, t, dir);
    if (dir == 0) {
      heads[static_cast<std::size_t>(t - 1)] = s;
    } else {
      heads[static_cast<std::size_t>(s - 1)] = t;
    }
    backtrack_complete(s, r, 0);
    backtrack_complete(r + 1, t, 1);
  }

  Chart complete;
  Chart incomplete;
  std::vector<int> heads;
};

}  // namespace

std::vector<int> eisner_decode(const ArcScores& scores) {
  const int n = static_cast<int>(scores.n_tokens());
  if (n == 0) return {};
  const int nodes = n + 1;
  Decoder dec(nodes);
  for (int s = 0; s < nodes; ++s) {
    dec.complete.at(s, s, 0) = 0.0;
    dec.complete.at(s, s, 1) = 0.0;
  }
  for (int k = 1; k < nodes; ++k) {
    for (int s = 0; s + k < nodes; ++s) {
      const int t = s + k;
      // incomplete spans: arc between s and t plus two facing complete halves
      double best = kNegInf;
      int best_r = -1;
      for (int r = s; r < t; ++r) {
        const double v = dec.complete.at(s, r, 0) + dec.complete.at(r + 1, t, 1);
        if (v > best) {
          best = v;
          best_r = r;
        }
      }
      if (best_r >= 0) {
        dec.incomplete.at(s, t, 0) = best + scores(s, t);
        dec.incomplete.arg(s, t, 0) = best_r;
        if (s != 0) {  // the root is never a dependent
          dec.incomplete.at(s, t, 1) = best + scores(t, s);
          dec.incomplete.arg(s, t, 1) = best_r;
        }
      }
      // complete spans
      best = kNegInf;
      best_r = -1;
      for (int r = s + 1; r <= t; ++r) {
        const double v = dec.incomplete.at(s, r, 0) + dec.complete.at(r, t, 0);
        if (v > best) {
          best = v;
          best_r = r;
        }
      }
      dec.complete.at(s, t, 0) = best;
      dec.complete.arg(s, t, 0) = best_r;
      if (s != 0) {
        best = kNegInf;
        best_r = -1;
        for (int r = s; r < t; ++r) {
          const double v = dec.complete.at(s, r, 1) + dec.incomplete.at(r, t, 1);
          if (v > best) {
            best = v;
            best_r = r;
          }
        }
        dec.complete.at(s, t, 1) = best;
        dec.complete.arg(s, t, 1) = best_r;
      }
    }
  }
  dec.backtrack_complete(0, n, 0);
  return dec.heads;
}

double tree_score(const ArcScores& scores, const std::vector<int>& heads) {
  double total = 0.0;
  for (std::size_t i = 0; i < heads.size(); ++i) total += scores(heads[i], static_cast<int>(i + 1));
  return total;
}

}  // namespace pbp

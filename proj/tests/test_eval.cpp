#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pbp/error.hpp"
#include "pbp/eval.hpp"
#include "test_util.hpp"

using namespace pbp;
using pbp::testing::make_sentence;

TEST(Evaluate, MetricIdentitiesOnRandomConfigurations) {
  std::mt19937_64 rng(41);
  for (int config = 0; config < 300; ++config) {
    std::vector<DepTree> gold;
    std::vector<PartialDepTree> pred;
    std::size_t t = 0, a = 0, c = 0;
    const int abstain_pct = static_cast<int>(rng() % 101);
    for (int s = 0; s < 5; ++s) {
      const std::size_t n = 1 + rng() % 8;
      const DepTree g(make_sentence(n), pbp::testing::random_heads(n, rng));
      const DepTree p = rng() % 2 ? g : DepTree(g.sentence(), pbp::testing::random_heads(n, rng));
      std::vector<int> heads = p.heads();
      for (std::size_t i = 0; i < n; ++i) {
        ++t;
        if (static_cast<int>(rng() % 100) < abstain_pct) {
          heads[i] = kAbstained;
          continue;
        }
        ++a;
        c += heads[i] == g.heads()[i];
      }
      gold.push_back(g);
      pred.emplace_back(g.sentence(), heads);
    }
    const auto r = evaluate(pred, gold);
    EXPECT_EQ(r.n_total, t);
    EXPECT_EQ(r.n_assigned, a);
    EXPECT_EQ(r.n_abstained, t - a);
    EXPECT_EQ(r.n_correct, c);
    EXPECT_EQ(r.precision, a ? static_cast<double>(c) / static_cast<double>(a) : 0.0);
    EXPECT_EQ(r.recall, static_cast<double>(c) / static_cast<double>(t));
    EXPECT_EQ(r.coverage, static_cast<double>(a) / static_cast<double>(t));
    EXPECT_EQ(r.accuracy, r.recall);
    if (a == t) {
      EXPECT_EQ(r.precision, r.recall);
    }
  }
}

TEST(Evaluate, ExcludedPosAndMisalignment) {
  const Sentence s = Sentence::from_words({"a", ",", "b"}, {"DT", ",", "NN"});
  const DepTree g(s, {3, 3, 0});
  const PartialDepTree p(s, {3, 1, 0});
  EvalOptions opt;
  opt.excluded_pos = {","};
  const auto r = evaluate({p}, {g}, opt);
  EXPECT_EQ(r.n_total, 2u);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(evaluate({p}, {g}).n_correct, 2u);
  const Sentence other = Sentence::from_words({"x", ",", "b"}, {"DT", ",", "NN"});
  EXPECT_THROW(evaluate({PartialDepTree(other, {3, 3, 0})}, {g}), DataError);
  EXPECT_THROW(evaluate({p, p}, {g}), DataError);
}

TEST(Evaluate, SentenceCoverage) {
  EXPECT_EQ(sentence_coverage(1, 4), 0.25);
  EXPECT_THROW(sentence_coverage(1, 0), std::invalid_argument);
  EXPECT_THROW(sentence_coverage(5, 4), std::invalid_argument);
}

namespace {

// Probability that an incorrect decision outranks a correct one, ties counted half.
double mann_whitney(const std::vector<ScoredDecision>& d) {
  double wins = 0.0, pairs = 0.0;
  for (const auto& x : d) {
    if (x.correct) continue;
    for (const auto& y : d) {
      if (!y.correct) continue;
      pairs += 1.0;
      wins += x.risk > y.risk ? 1.0 : (x.risk == y.risk ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

}  // namespace

TEST(Roc, AucMatchesMannWhitney) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoredDecision> d;
    const int n = 2 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      const bool correct = i == 0 ? true : (i == 1 ? false : rng() % 3 != 0);
      double r = correct ? u(rng) * 0.8 : 0.2 + u(rng) * 0.8;
      if (trial % 2) r = std::round(r * 5) / 5;  // many ties
      d.push_back({r, correct});
    }
    const auto curve = roc_curve(d, 1000);
    EXPECT_NEAR(curve.auc, mann_whitney(d), 1e-12);
    ASSERT_FALSE(curve.points.empty());
    EXPECT_TRUE(std::isinf(curve.points.front().threshold));
    EXPECT_EQ(curve.points.front().tpr, 1.0);
    EXPECT_EQ(curve.points.front().fpr, 1.0);
    EXPECT_EQ(curve.points.back().tpr, 0.0);
    EXPECT_EQ(curve.points.back().fpr, 0.0);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      EXPECT_LT(curve.points[i - 1].threshold, curve.points[i].threshold);
      EXPECT_LE(curve.points[i].tpr, curve.points[i - 1].tpr);
      EXPECT_LE(curve.points[i].fpr, curve.points[i - 1].fpr);
    }
  }
}

TEST(Roc, PointCapKeepsEndpointsAndAuc) {
  std::mt19937_64 rng(47);
  std::vector<ScoredDecision> d;
  for (int i = 0; i < 500; ++i) d.push_back({std::uniform_real_distribution<double>(0, 1)(rng), i % 4 != 0});
  const auto full = roc_curve(d, 100000);
  const auto small = roc_curve(d, 11);
  EXPECT_EQ(full.points.size(), 501u);
  EXPECT_EQ(small.points.size(), 11u);
  EXPECT_EQ(small.auc, full.auc);
  EXPECT_EQ(small.points.front().threshold, full.points.front().threshold);
  EXPECT_EQ(small.points.back().threshold, full.points.back().threshold);
}

TEST(Roc, DegenerateInputs) {
  EXPECT_THROW(roc_curve({{0.1, true}, {0.2, true}}), DataError);
  EXPECT_THROW(roc_curve({{0.1, true}, {std::nan(""), false}}), DataError);
  EXPECT_THROW(roc_curve({{0.1, true}, {0.2, false}}, 1), std::invalid_argument);
  EXPECT_EQ(roc_curve({{0.1, true}, {0.2, false}}).auc, 1.0);
  EXPECT_EQ(roc_curve({{0.2, true}, {0.1, false}}).auc, 0.0);
}

TEST(Roc, ScoredDecisionsFollowRisksAndHeads) {
  const Sentence s = Sentence::from_words({"a", ".", "b"}, {"DT", ".", "NN"});
  const DepTree gold(s, {3, 3, 0});
  RiskAnnotatedTree rat{DepTree(s, {3, 1, 0}), std::vector<double>{0.1, 0.2, 0.3}, {}};
  EvalOptions opt;
  opt.excluded_pos = {"."};
  const auto d = scored_decisions({rat}, {gold}, opt);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].risk, 0.1);
  EXPECT_TRUE(d[0].correct);
  EXPECT_EQ(d[1].risk, 0.3);
  EXPECT_EQ(scored_decisions({rat}, {gold}).size(), 3u);
  EXPECT_FALSE(scored_decisions({rat}, {gold})[1].correct);
}

TEST(PPBreakdown, HandCountedConfusion) {
  const Sentence s =
      Sentence::from_words({"saw", "In", "in", "of", "x"}, {"VBD", "IN", "IN", "IN", "NN"});
  const DepTree gold(s, {0, 1, 1, 5, 1});
  // Tokens 2 and 4 wrong; risks flag tokens 2 and 3.
  RiskAnnotatedTree rat{DepTree(s, {0, 5, 1, 1, 1}), std::vector<double>{0.0, 0.9, 0.5, 0.1, 0.0}, {}};
  const auto pp = pp_breakdown({rat}, {gold}, 0.15, "IN");
  EXPECT_EQ(pp.overall, (Confusion{1, 1, 0, 1}));
  ASSERT_EQ(pp.rows.size(), 2u);
  EXPECT_EQ(pp.rows[0].form, "in");
  EXPECT_EQ(pp.rows[0].counts, (Confusion{1, 1, 0, 0}));
  EXPECT_EQ(pp.rows[1].form, "of");
  EXPECT_EQ(pp.rows[1].counts, (Confusion{0, 0, 0, 1}));
  std::ostringstream out;
  write_pp_breakdown(pp, out);
  EXPECT_EQ(out.str(), "form\tTP\tFP\tTN\tFN\ttotal\n*ALL*\t1\t1\t0\t1\t3\nin\t1\t1\t0\t0\t2\nof\t0\t0\t0\t1\t1\n");
}

TEST(Report, NotesEmptyAssignment) {
  EvalReport r;
  r.n_total = 3;
  r.n_abstained = 3;
  std::ostringstream out;
  write_report(r, out);
  EXPECT_NE(out.str().find("note\t"), std::string::npos);
  EXPECT_NE(out.str().find("precision\t0\n"), std::string::npos);
}

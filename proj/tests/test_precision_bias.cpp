#include <gtest/gtest.h>

#include <random>

#include "pbp/error.hpp"
#include "pbp/eval.hpp"
#include "pbp/precision_bias.hpp"
#include "test_util.hpp"

using namespace pbp;
using pbp::testing::make_sentence;

namespace {

std::vector<RiskAnnotatedTree> random_corpus(std::mt19937_64& rng, std::size_t n_sent) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RiskAnnotatedTree> out;
  for (std::size_t i = 0; i < n_sent; ++i) {
    const std::size_t n = 1 + rng() % 10;
    RiskAnnotatedTree r{DepTree(make_sentence(n), pbp::testing::random_heads(n, rng)), std::vector<double>(n), {}};
    for (auto& x : *r.edge_risks) x = rng() % 5 == 0 ? std::round(u(rng) * 4) / 4 : u(rng);
    out.push_back(std::move(r));
  }
  return out;
}

double coverage(const std::vector<RiskAnnotatedTree>& rats, double r) {
  std::size_t total = 0, kept = 0;
  for (const auto& rat : rats) {
    const auto p = prune(rat, r);
    total += p.size();
    kept += p.n_assigned();
  }
  return static_cast<double>(kept) / static_cast<double>(total);
}

}  // namespace

TEST(Prune, KeepsHeadIffRiskAtMostThreshold) {
  const Sentence s = make_sentence(4);
  RiskAnnotatedTree rat{DepTree(s, {0, 1, 2, 3}), std::vector<double>{0.1, 0.5, 0.50000001, 1.0}, {}};
  const auto p = prune(rat, 0.5);
  EXPECT_EQ(p.heads(), (std::vector<int>{0, 1, kAbstained, kAbstained}));
  EXPECT_EQ(prune(rat, 1.0).n_assigned(), 4u);
  EXPECT_EQ(prune(rat, 0.0).n_assigned(), 0u);
  RiskAnnotatedTree no_edges{rat.tree, std::nullopt, {0.2}};
  EXPECT_THROW(prune(no_edges, 0.5), std::invalid_argument);
}

TEST(Prune, CoverageIsMonotoneInThreshold) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  for (int corpus = 0; corpus < 50; ++corpus) {
    const auto rats = random_corpus(rng, 20);
    for (int pair = 0; pair < 40; ++pair) {
      double r1 = u(rng), r2 = u(rng);
      if (pair % 4 == 0) r2 = r1;
      if (r1 > r2) std::swap(r1, r2);
      EXPECT_LE(coverage(rats, r1), coverage(rats, r2));
    }
  }
}

TEST(Selection, CountsAndKMonotonicity) {
  const Sentence s = make_sentence(3);
  std::vector<RiskAnnotatedTree> rats{
      {DepTree(s, {0, 1, 1}), std::vector<double>{0.0, 0.0, 0.0}, {}},
      {DepTree(s, {0, 1, 1}), std::vector<double>{0.9, 0.0, 0.0}, {}},
      {DepTree(s, {0, 1, 1}), std::vector<double>{0.9, 0.9, 0.2}, {}},
      {DepTree(s, {0, 1, 1}), std::nullopt, {0.7, 0.8, 0.9}},
  };
  EXPECT_EQ(count_risky(rats[2], 0.5), 2u);
  EXPECT_EQ(count_risky(rats[2], 0.1), 3u);
  EXPECT_EQ(count_risky(rats[3], 0.75), 2u);
  auto r0 = select_parses(rats, {0.5, 0});
  EXPECT_EQ(r0.selected, (std::vector<std::size_t>{0}));
  EXPECT_EQ(r0.rejected, (std::vector<std::size_t>{1, 2, 3}));
  std::size_t prev = 0;
  for (int k = 0; k <= 4; ++k) {
    const auto r = select_parses(rats, {0.5, k});
    EXPECT_GE(r.selected.size(), prev);
    EXPECT_EQ(r.selected.size() + r.rejected.size(), rats.size());
    prev = r.selected.size();
  }
  EXPECT_THROW(select_parses(rats, {1.5, 0}), std::invalid_argument);
  EXPECT_THROW(select_parses(rats, {0.5, -1}), std::invalid_argument);
}

TEST(Selection, ScoreIsTokenPrecisionOfSelectedSentences) {
  const Sentence s = make_sentence(2);
  const DepTree gold(s, {0, 1});
  std::vector<RiskAnnotatedTree> rats{
      {DepTree(s, {0, 1}), std::vector<double>{0.0, 0.0}, {}},  // 2/2 correct
      {DepTree(s, {2, 0}), std::vector<double>{0.0, 0.9}, {}},  // 0/2 correct
  };
  const auto sc0 = score_selection(rats, {gold, gold}, {0.5, 0});
  EXPECT_EQ(sc0.precision, 1.0);
  EXPECT_EQ(sc0.sentence_coverage, 0.5);
  const auto sc1 = score_selection(rats, {gold, gold}, {0.5, 1});
  EXPECT_EQ(sc1.precision, 0.5);
  EXPECT_EQ(sc1.n_selected, 2u);
  EXPECT_EQ(score_selection(rats, {gold, gold}, {0.0, 0}).precision, 1.0);
  EXPECT_THROW(score_selection(rats, {gold}, {0.5, 0}), DataError);
}

TEST(GridSearch, GridAndTargets) {
  const auto grid = selection_grid();
  ASSERT_EQ(grid.size(), 5u * 51u);
  EXPECT_EQ(grid.front().max_risky, 0);
  EXPECT_EQ(grid.front().risk_threshold, 0.0);
  EXPECT_EQ(grid[50].risk_threshold, 0.5);
  EXPECT_EQ(grid.back().max_risky, 4);
  const auto t = default_precision_targets();
  ASSERT_EQ(t.size(), 21u);
  EXPECT_DOUBLE_EQ(t.front(), 0.89);
  EXPECT_DOUBLE_EQ(t.back(), 0.99);
}

TEST(GridSearch, MaximizesCoverageWithTieBreaks) {
  const Sentence s = make_sentence(2);
  const DepTree gold(s, {0, 1});
  const DepTree wrong(s, {2, 0});
  // Sentence 0 is always selected. Sentence 1 (all wrong) has one edge at risk 0.3.
  std::vector<RiskAnnotatedTree> rats{
      {gold, std::vector<double>{0.0, 0.0}, {}},
      {wrong, std::vector<double>{0.3, 0.0}, {}},
  };
  const auto res = grid_search(rats, {gold, gold}, {0.9, 0.4, 1.01});
  ASSERT_EQ(res.choices.size(), 3u);
  // Precision 1 requires rejecting sentence 1: K = 0 and R < 0.3; the largest such R is 0.29.
  ASSERT_TRUE(res.choices[0].best);
  EXPECT_EQ(res.choices[0].best->params.max_risky, 0);
  EXPECT_DOUBLE_EQ(res.choices[0].best->params.risk_threshold, 0.29);
  // Full coverage is reachable with K = 0 at R >= 0.3; ties go to the largest R.
  ASSERT_TRUE(res.choices[1].best);
  EXPECT_EQ(res.choices[1].best->score.sentence_coverage, 1.0);
  EXPECT_EQ(res.choices[1].best->params.max_risky, 0);
  EXPECT_DOUBLE_EQ(res.choices[1].best->params.risk_threshold, 0.5);
  EXPECT_FALSE(res.choices[2].best);
}

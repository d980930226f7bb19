#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>

#include "pbp/error.hpp"
#include "pbp/eval.hpp"
#include "pbp/riskiness.hpp"

using namespace pbp;

namespace {

struct Fixture {
  std::vector<DepTree> train, risk, dev;
  std::shared_ptr<const ParserModel> ef, sr, mst;
  std::vector<ParseOutput> risk_parsed, dev_parsed;
};

const Fixture& fx() {
  static const Fixture f = [] {
    Fixture f;
    const auto trees = generate_treebank(21, 600, 18);
    f.train.assign(trees.begin(), trees.begin() + 350);
    f.risk.assign(trees.begin() + 350, trees.begin() + 500);
    f.dev.assign(trees.begin() + 500, trees.end());
    f.ef = std::make_shared<ParserModel>(train_parser(ParserKind::EasyFirst, f.train, {2, 1}));
    f.sr = std::make_shared<ParserModel>(train_parser(ParserKind::ShiftReduce, f.train, {2, 1}));
    f.mst = std::make_shared<ParserModel>(train_parser(ParserKind::Mst1, f.train, {2, 1}));
    for (const auto& t : f.risk) f.risk_parsed.push_back(parse(*f.ef, t.sentence()));
    for (const auto& t : f.dev) f.dev_parsed.push_back(parse(*f.ef, t.sentence()));
    return f;
  }();
  return f;
}

std::size_t count_label(const std::vector<RiskExample>& ex, RiskLabel l) {
  std::size_t n = 0;
  for (const auto& e : ex) n += e.label == l;
  return n;
}

}  // namespace

TEST(Ensemble, RiskZeroExactlyWhereAllMembersAgree) {
  EnsembleConfig cfg{{fx().sr, fx().ef, fx().mst}, std::nullopt};
  EXPECT_EQ(cfg.primary_index(), 1u);
  for (const auto& t : fx().dev) {
    const auto rat = ensemble_risk(cfg, t.sentence());
    const auto a = parse(*fx().ef, t.sentence()).tree;
    const auto b = parse(*fx().sr, t.sentence()).tree;
    const auto c = parse(*fx().mst, t.sentence()).tree;
    EXPECT_EQ(rat.tree, a);
    ASSERT_TRUE(rat.edge_risks);
    for (int tok = 1; tok <= static_cast<int>(t.size()); ++tok) {
      const bool agree = a.head(tok) == b.head(tok) && b.head(tok) == c.head(tok);
      EXPECT_EQ((*rat.edge_risks)[static_cast<std::size_t>(tok - 1)], agree ? 0.0 : 1.0);
    }
  }
}

TEST(Ensemble, NeedsTwoMembers) {
  EnsembleConfig one{{fx().ef}, std::nullopt};
  EXPECT_THROW(ensemble_risk(one, fx().dev[0].sentence()), std::invalid_argument);
  EnsembleConfig bad{{fx().ef, fx().sr}, 5};
  EXPECT_THROW(bad.primary_index(), std::invalid_argument);
}

TEST(RiskExamples, EdgeLabelsAreHeadErrors) {
  for (auto fs : {FeatureSet::EdgeState, FeatureSet::EdgeFactored, FeatureSet::EdgeHigher}) {
    const auto ex = risk_examples_from_parses(fx().risk_parsed, fx().risk, fs);
    std::size_t tokens = 0, wrong = 0;
    for (std::size_t i = 0; i < fx().risk.size(); ++i) {
      tokens += fx().risk[i].size();
      for (int t = 1; t <= static_cast<int>(fx().risk[i].size()); ++t) {
        wrong += fx().risk_parsed[i].tree.head(t) != fx().risk[i].head(t);
      }
    }
    ASSERT_EQ(ex.size(), tokens);
    EXPECT_EQ(count_label(ex, RiskLabel::Risky), wrong);
    for (const auto& e : ex) {
      EXPECT_EQ(e.kind, ExampleKind::Edge);
      const bool is_wrong = fx().risk_parsed[e.sentence].tree.head(e.index) != fx().risk[e.sentence].head(e.index);
      EXPECT_EQ(e.label == RiskLabel::Risky, is_wrong);
    }
  }
}

TEST(RiskExamples, ActionRiskyAtLeastEdgeRisky) {
  const auto edge = risk_examples_from_parses(fx().risk_parsed, fx().risk, FeatureSet::EdgeState);
  for (auto fs : {FeatureSet::ActionProcess, FeatureSet::ActionState}) {
    const auto act = risk_examples_from_parses(fx().risk_parsed, fx().risk, fs);
    EXPECT_EQ(act.size(), edge.size());  // one attachment per token
    EXPECT_GE(count_label(act, RiskLabel::Risky), count_label(edge, RiskLabel::Risky));
    for (const auto& e : act) EXPECT_EQ(e.kind, ExampleKind::Action);
  }
}

TEST(RiskExamples, MisalignedInputIsDataError) {
  std::vector<DepTree> shorter(fx().risk.begin(), fx().risk.end() - 1);
  EXPECT_THROW(risk_examples_from_parses(fx().risk_parsed, shorter, FeatureSet::EdgeFactored), DataError);
  std::vector<ParseOutput> no_trace{ParseOutput{fx().risk_parsed[0].tree, std::nullopt}};
  std::vector<DepTree> one{fx().risk[0]};
  EXPECT_THROW(risk_examples_from_parses(no_trace, one, FeatureSet::EdgeState), std::invalid_argument);
  EXPECT_NO_THROW(risk_examples_from_parses(no_trace, one, FeatureSet::EdgeFactored));
}

TEST(RiskExamples, OverlapWithParserTrainingIsRejected) {
  EXPECT_EQ(count_overlap(*fx().ef, fx().risk), 0u);
  std::vector<DepTree> mixed(fx().train.begin(), fx().train.begin() + 3);
  mixed.push_back(fx().risk[0]);
  EXPECT_EQ(count_overlap(*fx().ef, mixed), 3u);
  EXPECT_THROW(generate_risk_examples(*fx().ef, mixed, FeatureSet::EdgeFactored), DataError);
  EXPECT_NO_THROW(generate_risk_examples(*fx().ef, mixed, FeatureSet::EdgeFactored, 3));
  EXPECT_THROW(generate_risk_examples(*fx().sr, fx().risk, FeatureSet::EdgeState), std::invalid_argument);
}

TEST(RiskFeatures, ActionProcessValues) {
  const auto& tr = *fx().risk_parsed[0].trace;
  const auto fv = features_action_process(tr, 0);
  const auto& s = tr.steps[0];
  EXPECT_EQ(fv.value("ap_len"), tr.sentence_length);
  EXPECT_EQ(fv.value("ap_parentless"), s.n_pending);
  EXPECT_EQ(fv.value("ap_best"), s.best_score);
  EXPECT_EQ(fv.value("ap_second"), s.second_best_score);
  EXPECT_EQ(fv.value("ap_margin"), s.best_score - s.second_best_score);
}

TEST(RiskFeatures, EdgeStateIsAttachingStepFeatures) {
  const auto& p = fx().risk_parsed[1];
  for (int t = 1; t <= static_cast<int>(p.tree.size()); ++t) {
    const int step = p.trace->attaching_step(t);
    ASSERT_GE(step, 0);
    EXPECT_EQ(features_edge_state(*p.trace, t), features_action_state(p.trace->steps[static_cast<std::size_t>(step)]));
  }
  ActionTrace empty;
  empty.sentence_length = 1;
  EXPECT_THROW(features_edge_state(empty, 1), std::invalid_argument);
}

TEST(RiskFeatures, HigherOrderExtendsFirstOrder) {
  const auto& p = fx().risk_parsed[2];
  const Sentence& s = p.tree.sentence();
  for (int t = 1; t <= static_cast<int>(s.size()); ++t) {
    const auto lo = features_edge_factored(s, p.tree, t);
    const auto hi = features_edge_higher(s, p.tree, t);
    EXPECT_GT(hi.size(), lo.size());
    for (const auto& [name, v] : lo.entries()) EXPECT_EQ(hi.value(name), v);
  }
}

TEST(RiskExamples, TextRoundTrip) {
  const auto ex = risk_examples_from_parses(fx().risk_parsed, fx().risk, FeatureSet::ActionProcess);
  std::stringstream ss;
  write_risk_examples(ex, ss);
  const auto back = read_risk_examples(ss);
  const auto expect = to_labeled(ex);
  ASSERT_EQ(back.size(), expect.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].label, expect[i].label);
    EXPECT_EQ(back[i].features, expect[i].features);
  }
  std::istringstream bad("MAYBE\ta:1\n");
  EXPECT_THROW(read_risk_examples(bad), FormatError);
}

TEST(RiskModelScoring, EdgeAndActionModels) {
  const auto ex = risk_examples_from_parses(fx().risk_parsed, fx().risk, FeatureSet::EdgeFactored);
  const RiskModel edge{train_maxent(to_labeled(ex), {1.0, 1e-6, 60}), FeatureSet::EdgeFactored};
  const auto rat = score_risks(edge, fx().dev_parsed[0]);
  ASSERT_TRUE(rat.edge_risks);
  EXPECT_EQ(rat.edge_risks->size(), rat.tree.size());
  for (int t = 1; t <= static_cast<int>(rat.tree.size()); ++t) {
    EXPECT_EQ((*rat.edge_risks)[static_cast<std::size_t>(t - 1)],
              predict_risk(edge, features_edge_factored(rat.tree.sentence(), rat.tree, t)));
  }

  const auto aex = risk_examples_from_parses(fx().risk_parsed, fx().risk, FeatureSet::ActionProcess);
  const RiskModel action{train_maxent(to_labeled(aex), {1.0, 1e-6, 60}), FeatureSet::ActionProcess};
  EXPECT_THROW(score_risks(action, fx().dev_parsed[0]), ModelMismatchError);
  const auto sel = score_risks(action, fx().dev_parsed[0], RiskUse::Selection);
  EXPECT_FALSE(sel.edge_risks);
  EXPECT_EQ(sel.action_risks.size(), fx().dev_parsed[0].trace->steps.size());

  const std::string path = ::testing::TempDir() + "pbp_risk_model.txt";
  save_risk_model(edge, path);
  const RiskModel back = load_risk_model(path);
  EXPECT_EQ(back.feature_set, FeatureSet::EdgeFactored);
  EXPECT_EQ(score_risks(back, fx().dev_parsed[0]).edge_risks, rat.edge_risks);
  std::remove(path.c_str());
}

TEST(RiskAnnotated, RoundTripIsExact) {
  std::vector<RiskAnnotatedTree> rats;
  for (std::size_t i = 0; i < 10; ++i) {
    RiskAnnotatedTree r{fx().dev[i], std::vector<double>(fx().dev[i].size()), {}};
    for (std::size_t t = 0; t < r.edge_risks->size(); ++t) (*r.edge_risks)[t] = 1.0 / static_cast<double>(t + 3);
    if (i % 2) r.action_risks = {0.1, 1.0 / 7.0};
    rats.push_back(r);
  }
  RiskAnnotatedTree action_only{fx().dev[11], std::nullopt, {0.25, 0.5}};
  rats.push_back(action_only);
  std::stringstream ss;
  write_risk_annotated(rats, ss);
  const std::string text = ss.str();
  const auto back = read_risk_annotated(ss);
  ASSERT_EQ(back.size(), rats.size());
  for (std::size_t i = 0; i < rats.size(); ++i) {
    EXPECT_EQ(back[i].tree, rats[i].tree);
    EXPECT_EQ(back[i].edge_risks, rats[i].edge_risks);
    EXPECT_EQ(back[i].action_risks, rats[i].action_risks);
  }
  std::stringstream again;
  write_risk_annotated(back, again);
  EXPECT_EQ(again.str(), text);
  std::istringstream bad("1\ta\t_\tDT\tDT\trisk=1.5\t0\t_\t_\t_\n");
  EXPECT_THROW(read_risk_annotated(bad), FormatError);
}

// End-to-end acceptance checks on a generated corpus. Prints one PASS/FAIL line
// per criterion and exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pbp/conllx.hpp"
#include "pbp/eisner.hpp"
#include "pbp/eval.hpp"
#include "pbp/maxent.hpp"
#include "pbp/parser_model.hpp"
#include "pbp/precision_bias.hpp"
#include "pbp/riskiness.hpp"
#include "pbp/trace_io.hpp"
#include "pbp/treebank.hpp"

using namespace pbp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int n_failed = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++n_failed;
  std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Random tree with tokens attached in random order under already attached nodes.
std::vector<int> random_heads(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i + 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> attached{0};
  std::vector<int> heads(n, 0);
  for (int tok : order) {
    heads[static_cast<std::size_t>(tok - 1)] = attached[rng() % attached.size()];
    attached.push_back(tok);
  }
  return heads;
}

Sentence plain_sentence(std::size_t n) {
  std::vector<std::string> forms, tags;
  for (std::size_t i = 1; i <= n; ++i) {
    forms.push_back("t" + std::to_string(i));
    tags.push_back("X");
  }
  return Sentence::from_words(forms, tags);
}

bool crossing_free(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  for (int a = 1; a <= n; ++a) {
    const int l1 = std::min(a, heads[a - 1]), r1 = std::max(a, heads[a - 1]);
    for (int b = 1; b <= n; ++b) {
      const int l2 = std::min(b, heads[b - 1]), r2 = std::max(b, heads[b - 1]);
      if (l1 < l2 && l2 < r1 && r1 < r2) return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> projective_trees(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> heads(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      if (tree_violation(heads).empty() && crossing_free(heads)) out.push_back(heads);
      return;
    }
    for (int h = 0; h <= static_cast<int>(n); ++h) {
      if (h == static_cast<int>(i + 1)) continue;
      heads[i] = h;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

struct Experiment {
  CorpusSplit split;
  ParserModel ef, sr, mst;
  std::vector<ParseOutput> risk_parsed, dev_parsed;
  double train_seconds = 0.0;
};

std::vector<ParseOutput> parse_corpus(const ParserModel& pm, const std::vector<DepTree>& trees) {
  std::vector<ParseOutput> out;
  out.reserve(trees.size());
  for (const auto& t : trees) out.push_back(parse(pm, t.sentence()));
  return out;
}

double accuracy_of(const std::vector<ParseOutput>& parsed, const std::vector<DepTree>& gold) {
  std::vector<PartialDepTree> pred;
  for (const auto& p : parsed) pred.push_back(p.tree);
  return evaluate(pred, gold).accuracy;
}

struct RiskRun {
  MaxEntTrace trace;
  RiskModel model;
  std::vector<RiskAnnotatedTree> dev_rats;
  double auc = 0.0;
};

RiskRun train_risk(const Experiment& ex, FeatureSet fs) {
  RiskRun run;
  const auto examples = risk_examples_from_parses(ex.risk_parsed, ex.split.risk_train, fs);
  run.model = RiskModel{train_maxent(to_labeled(examples), {}, &run.trace), fs};
  for (const auto& p : ex.dev_parsed) run.dev_rats.push_back(score_risks(run.model, p));
  run.auc = roc_curve(scored_decisions(run.dev_rats, ex.split.dev)).auc;
  return run;
}

EvalReport prune_eval(const std::vector<RiskAnnotatedTree>& rats, const std::vector<DepTree>& gold, double r) {
  std::vector<PartialDepTree> pruned;
  for (const auto& rat : rats) pruned.push_back(prune(rat, r));
  return evaluate(pruned, gold);
}

std::string conll_text(const std::vector<PartialDepTree>& trees) {
  std::ostringstream out;
  write_conllx(trees, out);
  return out.str();
}

// Serializes every stage of a small pipeline so two runs can be compared byte for byte.
std::vector<std::string> pipeline_artifacts() {
  std::vector<std::string> out;
  const auto trees = generate_treebank(99, 1200, 30);
  out.push_back(conll_text(std::vector<PartialDepTree>(trees.begin(), trees.end())));
  const auto sp = split_corpus(trees, {0.5, 0.25, 0.125, 0.125}, 5);
  std::vector<std::shared_ptr<const ParserModel>> members;
  for (auto k : {ParserKind::EasyFirst, ParserKind::ShiftReduce, ParserKind::Mst1}) {
    members.push_back(std::make_shared<ParserModel>(train_parser(k, sp.parser_train, {3, 4})));
    std::ostringstream m;
    save_model(members.back()->to_linear_model(), m);
    out.push_back(m.str());
  }
  const auto risk_parsed = parse_corpus(*members[0], sp.risk_train);
  const auto dev_parsed = parse_corpus(*members[0], sp.dev);
  std::vector<ActionTrace> traces;
  for (const auto& p : dev_parsed) traces.push_back(*p.trace);
  std::ostringstream tr;
  write_traces(traces, tr);
  out.push_back(tr.str());
  for (auto fs : {FeatureSet::EdgeState, FeatureSet::ActionProcess}) {
    const auto ex = risk_examples_from_parses(risk_parsed, sp.risk_train, fs);
    std::ostringstream exs;
    write_risk_examples(ex, exs);
    out.push_back(exs.str());
    RiskModel rm{train_maxent(to_labeled(ex), {1.0, 1e-6, 100}), fs};
    std::ostringstream ms;
    save_model(rm.model, ms);
    out.push_back(ms.str());
    std::vector<RiskAnnotatedTree> rats;
    for (const auto& p : dev_parsed) rats.push_back(score_risks(rm, p, RiskUse::Selection));
    std::ostringstream as;
    write_risk_annotated(rats, as);
    out.push_back(as.str());
    std::ostringstream gs;
    for (const auto& c : grid_search(rats, sp.dev, default_precision_targets()).choices) {
      gs << c.target << ' ' << (c.best ? c.best->params.risk_threshold : -1.0) << ' '
         << (c.best ? c.best->params.max_risky : -1) << '\n';
    }
    out.push_back(gs.str());
    if (rats.front().edge_risks) {
      std::vector<PartialDepTree> pruned;
      for (const auto& r : rats) pruned.push_back(prune(r, 0.2));
      out.push_back(conll_text(pruned));
      std::ostringstream rs;
      write_roc_tsv(roc_curve(scored_decisions(rats, sp.dev)), rs);
      write_report(evaluate(pruned, sp.dev), rs);
      out.push_back(rs.str());
    }
  }
  EnsembleConfig cfg{members, std::nullopt};
  std::vector<RiskAnnotatedTree> ens;
  for (const auto& t : sp.dev) ens.push_back(ensemble_risk(cfg, t.sentence()));
  std::ostringstream es;
  write_risk_annotated(ens, es);
  out.push_back(es.str());
  return out;
}

}  // namespace

int main() {
  const auto t_start = Clock::now();

  report(1, "Eisner optimality vs brute force", [] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<std::vector<std::vector<int>>> trees(7);
    for (std::size_t n = 1; n <= 6; ++n) trees[n] = projective_trees(n);
    const auto t0 = Clock::now();
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
      const std::size_t n = 1 + rng() % 6;
      ArcScores sc(n);
      for (int h = 0; h <= static_cast<int>(n); ++h) {
        for (int d = 1; d <= static_cast<int>(n); ++d) sc(h, d) = u(rng);
      }
      double best = -1e300;
      for (const auto& h : trees[n]) best = std::max(best, tree_score(sc, h));
      const auto heads = eisner_decode(sc);
      if (!tree_violation(heads).empty() || !crossing_free(heads) || tree_score(sc, heads) != best) ++mismatches;
    }
    const double secs = seconds_since(t0);
    return Outcome{mismatches == 0 && secs < 30.0,
                   fmt("%.0f/200 mismatches, %.2fs", mismatches, secs)};
  });

  report(2, "MaxEnt gradient check and monotone objective", [] {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto trees = generate_treebank(31, 300, 20);
    std::vector<LabeledFeatures> ex;
    for (const auto& t : trees) {
      for (int d = 1; d <= static_cast<int>(t.size()); ++d) {
        auto entries = features_edge_factored(t.sentence(), t, d).entries();
        entries.emplace_back("len", static_cast<double>(t.size()) / 10.0);
        const bool risky = u(rng) < 0.1 + 0.02 * static_cast<double>(std::abs(t.head(d) - d));
        ex.push_back({FeatureVector::from_entries(entries), risky ? RiskLabel::Risky : RiskLabel::Safe});
      }
    }
    const MaxEntObjective obj(ex, 1.0);
    const std::size_t dim = obj.dimension();
    std::vector<double> w(dim), g(dim), tmp(dim);
    double worst = 0.0;
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < dim; ++i) dims.push_back(i);
    // Five-point central difference of f along direction v at w.
    auto slope = [&](const std::vector<double>& v, double h) {
      auto at = [&](double t) {
        std::vector<double> x(w);
        for (std::size_t i = 0; i < dim; ++i) x[i] += t * v[i];
        return obj.evaluate(x, tmp);
      };
      return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    };
    auto rel_err = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6}); };
    for (int point = 0; point < 50; ++point) {
      for (auto& x : w) x = u(rng);
      obj.evaluate(w, g);
      // The full gradient along one random direction, then the bias and 40 random coordinates.
      std::vector<double> v(dim);
      double gv = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        v[i] = u(rng);
        gv += g[i] * v[i];
      }
      worst = std::max(worst, rel_err(slope(v, 1e-3), gv));
      std::shuffle(dims.begin() + 1, dims.end(), rng);
      for (std::size_t k = 0; k < std::min<std::size_t>(dim, 41); ++k) {
        std::vector<double> e(dim, 0.0);
        e[dims[k]] = 1.0;
        worst = std::max(worst, rel_err(slope(e, 1e-3), g[dims[k]]));
      }
    }
    MaxEntTrace trace;
    train_maxent(ex, {}, &trace);
    bool monotone = trace.objective.size() >= 2;
    for (std::size_t i = 1; i < trace.objective.size(); ++i) monotone &= trace.objective[i] <= trace.objective[i - 1];
    return Outcome{worst < 1e-4 && monotone,
                   fmt("max relative error %.2e over 50 points, %.0f monotone steps", worst,
                       static_cast<double>(trace.objective.size()))};
  });

  report(3, "Metric identities", [] {
    std::mt19937_64 rng(5);
    int bad = 0;
    for (int config = 0; config < 1000; ++config) {
      std::vector<DepTree> gold;
      std::vector<PartialDepTree> pred;
      std::size_t t = 0, a = 0, c = 0;
      const bool full = config % 5 == 0;
      const unsigned abstain = static_cast<unsigned>(rng() % 101);
      for (int s = 0; s < 1 + static_cast<int>(rng() % 6); ++s) {
        const std::size_t n = 1 + rng() % 12;
        const DepTree g(plain_sentence(n), random_heads(n, rng));
        std::vector<int> heads = rng() % 2 ? g.heads() : random_heads(n, rng);
        for (std::size_t i = 0; i < n; ++i) {
          ++t;
          if (!full && rng() % 100 < abstain) {
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
      const double T = static_cast<double>(t), A = static_cast<double>(a), C = static_cast<double>(c);
      bool ok = r.n_total == t && r.n_assigned == a && r.n_correct == c && r.n_abstained == t - a &&
                r.precision == (a ? C / A : 0.0) && r.recall == C / T && r.coverage == A / T;
      if (a == t) ok &= r.coverage == 1.0 && r.precision == r.recall && r.recall == r.accuracy;
      if (!ok) ++bad;
    }
    return Outcome{bad == 0, fmt("%.0f/1000 configurations violate an identity", bad)};
  });

  report(4, "Coverage monotone in the risk threshold", [] {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0, checks = 0;
    for (int corpus = 0; corpus < 100; ++corpus) {
      std::vector<RiskAnnotatedTree> rats;
      for (int s = 0; s < 15; ++s) {
        const std::size_t n = 1 + rng() % 10;
        RiskAnnotatedTree r{DepTree(plain_sentence(n), random_heads(n, rng)), std::vector<double>(n), {}};
        for (auto& x : *r.edge_risks) x = corpus % 2 ? std::round(u(rng) * 10) / 10 : u(rng);
        rats.push_back(std::move(r));
      }
      std::vector<double> thresholds{0.0, 1.0};
      for (int i = 0; i < 30; ++i) thresholds.push_back(u(rng));
      for (const auto& r : rats) thresholds.insert(thresholds.end(), r.edge_risks->begin(), r.edge_risks->end());
      std::sort(thresholds.begin(), thresholds.end());
      std::vector<double> cov;
      for (double r : thresholds) {
        std::size_t total = 0, kept = 0;
        for (const auto& rat : rats) {
          const auto p = prune(rat, r);
          total += p.size();
          kept += p.n_assigned();
        }
        cov.push_back(static_cast<double>(kept) / static_cast<double>(total));
      }
      for (std::size_t i = 0; i < cov.size(); ++i) {
        for (std::size_t j = i; j < cov.size(); ++j) {
          ++checks;
          violations += cov[i] > cov[j];
        }
      }
    }
    return Outcome{violations == 0, fmt("%.0f violations in %.0f ordered threshold pairs", violations, checks)};
  });

  // Shared corpus and parsers for the remaining criteria.
  const auto t_corpus = Clock::now();
  auto ex = std::make_unique<Experiment>();
  {
    const auto trees = generate_treebank(7, 9000, 40);
    ex->split = split_corpus(trees, {5.0 / 9, 2.0 / 9, 1.0 / 9, 1.0 / 9}, 3);
    const TrainOptions opt{10, 1};
    ex->ef = train_parser(ParserKind::EasyFirst, ex->split.parser_train, opt);
    ex->sr = train_parser(ParserKind::ShiftReduce, ex->split.parser_train, opt);
    ex->mst = train_parser(ParserKind::Mst1, ex->split.parser_train, opt);
    ex->train_seconds = seconds_since(t_corpus);
    ex->risk_parsed = parse_corpus(ex->ef, ex->split.risk_train);
    ex->dev_parsed = parse_corpus(ex->ef, ex->split.dev);
  }
  std::printf("       corpus: %zu parser-train / %zu risk-train / %zu dev sentences; parsers trained in %.1fs\n",
              ex->split.parser_train.size(), ex->split.risk_train.size(), ex->split.dev.size(), ex->train_seconds);
  const EnsembleConfig ensemble{{std::make_shared<ParserModel>(ex->ef), std::make_shared<ParserModel>(ex->sr),
                                 std::make_shared<ParserModel>(ex->mst)},
                                std::nullopt};
  std::vector<RiskAnnotatedTree> ens_dev;
  for (const auto& t : ex->split.dev) ens_dev.push_back(ensemble_risk(ensemble, t.sentence()));

  report(5, "Ensemble agreement semantics", [&] {
    std::size_t edges = 0, bad = 0;
    for (std::size_t i = 0; i < 500; ++i) {
      const Sentence& s = ex->split.dev[i].sentence();
      const auto a = parse(ex->ef, s).tree, b = parse(ex->sr, s).tree, c = parse(ex->mst, s).tree;
      const auto& rat = ens_dev[i];
      for (int t = 1; t <= static_cast<int>(s.size()); ++t) {
        ++edges;
        const bool agree = a.head(t) == b.head(t) && b.head(t) == c.head(t);
        const double risk = (*rat.edge_risks)[static_cast<std::size_t>(t - 1)];
        if ((risk == 0.0) != agree || (risk != 0.0 && risk != 1.0) || rat.tree.head(t) != a.head(t)) ++bad;
      }
    }
    return Outcome{bad == 0, fmt("%.0f of %.0f edges on 500 sentences disagree with member parses", bad, edges)};
  });

  report(6, "Ensemble-agreed precision beats best single parser by 3 points", [&] {
    const double acc_ef = accuracy_of(ex->dev_parsed, ex->split.dev);
    const double acc_sr = accuracy_of(parse_corpus(ex->sr, ex->split.dev), ex->split.dev);
    const double acc_mst = accuracy_of(parse_corpus(ex->mst, ex->split.dev), ex->split.dev);
    const double best = std::max({acc_ef, acc_sr, acc_mst});
    const auto agreed = prune_eval(ens_dev, ex->split.dev, 0.0);
    const double total_secs = seconds_since(t_corpus);
    return Outcome{agreed.precision - best >= 0.03 && total_secs < 600.0,
                   fmt("agreed precision %.2f at coverage %.2f vs best accuracy %.2f", 100 * agreed.precision,
                       100 * agreed.coverage, 100 * best) +
                       fmt(" (EF %.2f SR %.2f MST %.2f)", 100 * acc_ef, 100 * acc_sr, 100 * acc_mst)};
  });

  RiskRun factored, higher, state;
  report(7, "Edge-factored pruning frontier", [&] {
    factored = train_risk(*ex, FeatureSet::EdgeFactored);
    std::vector<double> risks;
    for (const auto& r : factored.dev_rats) risks.insert(risks.end(), r.edge_risks->begin(), r.edge_risks->end());
    std::sort(risks.begin(), risks.end());
    std::vector<std::pair<double, double>> frontier;  // (coverage, precision)
    std::string detail;
    for (double target : {0.80, 0.85, 0.90, 0.95, 1.00}) {
      const auto k = static_cast<std::size_t>(std::ceil(target * static_cast<double>(risks.size())));
      const double r = risks[std::max<std::size_t>(k, 1) - 1];
      const auto rep = prune_eval(factored.dev_rats, ex->split.dev, r);
      frontier.emplace_back(rep.coverage, rep.precision);
      detail += fmt("%.3f@%.3f ", rep.precision, rep.coverage);
    }
    bool strictly_decreasing = true;
    for (std::size_t i = 1; i < frontier.size(); ++i) {
      strictly_decreasing &= frontier[i].first > frontier[i - 1].first && frontier[i].second < frontier[i - 1].second;
    }
    const double accuracy = accuracy_of(ex->dev_parsed, ex->split.dev);
    const double at85 = frontier[1].second;
    return Outcome{strictly_decreasing && frontier.size() >= 5 && at85 - accuracy >= 0.02,
                   "precision@coverage " + detail + fmt("; gain at ~85%% coverage %.2f points", 100 * (at85 - accuracy))};
  });

  report(8, "ROC ordering edge_higher >= edge_factored >= edge_state", [&] {
    higher = train_risk(*ex, FeatureSet::EdgeHigher);
    state = train_risk(*ex, FeatureSet::EdgeState);
    const double tol = 0.01;
    const bool ordered = higher.auc >= factored.auc - tol && factored.auc >= state.auc - tol;
    const bool floor = std::min({higher.auc, factored.auc, state.auc}) >= 0.65;
    return Outcome{ordered && floor, fmt("AUC higher %.4f, factored %.4f, state %.4f", higher.auc, factored.auc,
                                         state.auc)};
  });

  report(9, "Ensemble parse selection over K = 0..4", [&] {
    bool ok = true;
    std::string detail;
    double prev_p = 2.0, prev_c = -1.0;
    for (int k = 0; k <= 4; ++k) {
      const auto s = score_selection(ens_dev, ex->split.dev, {0.5, k});
      ok &= s.precision <= prev_p && s.sentence_coverage >= prev_c;
      prev_p = s.precision;
      prev_c = s.sentence_coverage;
      detail += fmt("K=%.0f %.2f/%.2f ", k, 100 * s.precision, 100 * s.sentence_coverage);
    }
    return Outcome{ok, "precision/coverage " + detail};
  });

  report(10, "Risk-label bookkeeping", [&] {
    std::vector<PartialDepTree> pred;
    for (const auto& p : ex->risk_parsed) pred.push_back(p.tree);
    const auto rep = evaluate(pred, ex->split.risk_train);
    bool ok = true;
    std::size_t edge_risky = 0;
    for (auto fs : {FeatureSet::EdgeState, FeatureSet::EdgeFactored, FeatureSet::EdgeHigher}) {
      const auto exs = risk_examples_from_parses(ex->risk_parsed, ex->split.risk_train, fs);
      std::size_t risky = 0;
      for (const auto& e : exs) risky += e.label == RiskLabel::Risky;
      const double frac = static_cast<double>(risky) / static_cast<double>(exs.size());
      const double expect = static_cast<double>(rep.n_total - rep.n_correct) / static_cast<double>(rep.n_total);
      ok &= exs.size() == rep.n_total && risky == rep.n_total - rep.n_correct && frac == expect;
      edge_risky = risky;
    }
    std::size_t action_risky = 0;
    for (auto fs : {FeatureSet::ActionProcess, FeatureSet::ActionState}) {
      const auto exs = risk_examples_from_parses(ex->risk_parsed, ex->split.risk_train, fs);
      std::size_t risky = 0;
      for (const auto& e : exs) risky += e.label == RiskLabel::Risky;
      ok &= risky >= edge_risky;
      action_risky = risky;
    }
    return Outcome{ok, fmt("EDGE risky %.0f of %.0f (1 - accuracy = %.6f); ACTION risky %.0f",
                           static_cast<double>(edge_risky), static_cast<double>(rep.n_total),
                           1.0 - rep.accuracy, static_cast<double>(action_risky))};
  });

  ex.reset();

  report(11, "Determinism of every pipeline stage", [] {
    const auto a = pipeline_artifacts();
    const auto b = pipeline_artifacts();
    std::size_t differing = 0, bytes = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      differing += a[i] != b[i];
      bytes += a[i].size();
    }
    return Outcome{a.size() == b.size() && differing == 0,
                   fmt("%.0f artifacts (%.0f bytes), %.0f differ", static_cast<double>(a.size()),
                       static_cast<double>(bytes), static_cast<double>(differing))};
  });

  report(12, "CoNLL-X round trip with abstentions", [] {
    std::mt19937_64 rng(12);
    std::vector<PartialDepTree> trees;
    for (const auto& t : generate_treebank(13, 2000, 40)) {
      std::vector<int> heads = t.heads();
      for (auto& h : heads) {
        if (rng() % 3 == 0) h = kAbstained;
      }
      trees.emplace_back(t.sentence(), heads);
    }
    const std::string text = conll_text(trees);
    std::istringstream in(text);
    const auto back = read_conllx_partial(in);
    const bool same_trees = back == trees;
    const bool same_bytes = conll_text(back) == text;
    std::size_t abstained = 0;
    for (const auto& t : back) abstained += t.size() - t.n_assigned();
    return Outcome{same_trees && same_bytes,
                   fmt("2000 sentences, %.0f abstentions; trees/bytes ", static_cast<double>(abstained)) +
                       (same_trees ? "equal" : "DIFFER") + "/" + (same_bytes ? "equal" : "DIFFER")};
  });

  std::printf("%d of 12 criteria failed; total %.1fs\n", n_failed, seconds_since(t_start));
  return n_failed == 0 ? 0 : 1;
}

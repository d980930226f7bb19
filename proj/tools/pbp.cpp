// pbp: precision-biased dependency parsing pipeline.
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pbp/conllx.hpp"
#include "pbp/error.hpp"
#include "pbp/eval.hpp"
#include "pbp/parser_model.hpp"
#include "pbp/precision_bias.hpp"
#include "pbp/riskiness.hpp"
#include "pbp/trace_io.hpp"
#include "pbp/treebank.hpp"

namespace {

using namespace pbp;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

// Runs fn(i) for i in [0, n) on `threads` workers; results keep input order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn fn) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const int k = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<Sentence> read_sentences(const std::string& path) {
  std::vector<Sentence> out;
  for (const auto& t : read_conllx_partial(path)) out.push_back(t.sentence());
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_real(item));
    } catch (const FormatError&) {
      throw std::invalid_argument("'" + item + "' is not a number");
    }
  }
  return out;
}

std::set<std::string> punct_set(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

double token_accuracy(const std::vector<DepTree>& pred, const std::vector<DepTree>& gold, const EvalOptions& opt) {
  return evaluate(std::vector<PartialDepTree>(pred.begin(), pred.end()), gold, opt).accuracy;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

// Parses every sentence; traces are kept for easy-first models.
std::vector<ParseOutput> parse_all(const ParserModel& pm, const std::vector<Sentence>& sentences, int threads) {
  return parallel_map<ParseOutput>(sentences.size(), threads, [&](std::size_t i) { return parse(pm, sentences[i]); });
}

// Rebuilds parse outputs from a parsed CoNLL-X file and an optional trace file.
std::vector<ParseOutput> load_parsed(const std::string& input, const std::string& trace_path) {
  const auto trees = read_conllx(input);
  std::vector<ParseOutput> out;
  std::vector<ActionTrace> traces;
  if (!trace_path.empty()) {
    traces = read_traces(trace_path);
    if (traces.size() != trees.size()) {
      throw DataError("trace file has " + std::to_string(traces.size()) + " sentences, parsed input has " +
                      std::to_string(trees.size()));
    }
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    ParseOutput p{trees[i], std::nullopt};
    if (!traces.empty()) {
      if (traces[i].sentence_length != static_cast<int>(trees[i].size())) {
        throw DataError("trace of sentence " + std::to_string(i + 1) + " does not match its length");
      }
      p.trace = std::move(traces[i]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct Common {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string punct_exclude;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed) {
  if (with_seed) cmd->add_option("--seed", c.seed, "random seed")->required();
  cmd->add_option("--threads", c.threads, "worker threads (output order is unaffected)")->check(CLI::PositiveNumber);
  cmd->add_option("--punct-exclude", c.punct_exclude, "comma-separated POS tags left out of metrics");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precision-biased dependency parsing toolkit"};
  app.require_subcommand(1);
  Common common;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic projective treebank");
  std::size_t gen_n = 1000, gen_max_len = 40;
  std::string gen_out, gen_split;
  add_common(gen, common, true);
  gen->add_option("--n", gen_n, "number of sentences");
  gen->add_option("--max-len", gen_max_len, "maximum sentence length")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "output CoNLL-X file (a prefix with --split)")->required();
  gen->add_option("--split", gen_split,
                  "four fractions parser_train,risk_train,dev,test; writes <out>.<part>.conll");

  // train-parser
  auto* trp = app.add_subcommand("train-parser", "train EASY_FIRST, SHIFT_REDUCE or MST1");
  std::string trp_kind, trp_train, trp_out;
  int epochs = 10;
  add_common(trp, common, true);
  trp->add_option("--kind", trp_kind, "parser kind")->required();
  trp->add_option("--train", trp_train, "gold CoNLL-X")->required();
  trp->add_option("--out", trp_out, "model file")->required();
  trp->add_option("--epochs", epochs, "perceptron epochs")->check(CLI::PositiveNumber);

  // parse
  auto* prs = app.add_subcommand("parse", "parse with a trained model");
  std::string prs_model, prs_input, prs_output, prs_trace;
  add_common(prs, common, false);
  prs->add_option("--model", prs_model, "parser model")->required();
  prs->add_option("--input", prs_input, "CoNLL-X input (HEAD may be _)")->required();
  prs->add_option("--output", prs_output, "parsed CoNLL-X")->required();
  prs->add_option("--trace", prs_trace, "write easy-first action traces here");

  // train-risk
  auto* trr = app.add_subcommand("train-risk", "train a MaxEnt riskiness classifier");
  std::string trr_parser, trr_data, trr_fs, trr_out, trr_examples;
  double sigma = 1.0;
  std::size_t max_overlap = 0;
  int max_iter = 500;
  add_common(trr, common, true);
  trr->add_option("--parser", trr_parser, "EASY_FIRST parser model")->required();
  trr->add_option("--risk-train", trr_data, "gold risk-training CoNLL-X")->required();
  trr->add_option("--feature-set", trr_fs, "action_process|action_state|edge_state|edge_factored|edge_higher")
      ->required();
  trr->add_option("--out", trr_out, "risk model file")->required();
  trr->add_option("--sigma", sigma, "L2 prior standard deviation")->check(CLI::PositiveNumber);
  trr->add_option("--max-iter", max_iter, "optimizer iteration cap")->check(CLI::PositiveNumber);
  trr->add_option("--max-overlap", max_overlap, "tolerated risk-train sentences seen by the parser");
  trr->add_option("--examples-out", trr_examples, "also write the labeled examples");

  // prune
  auto* prn = app.add_subcommand("prune", "abstain on edges whose risk exceeds a threshold");
  std::string prn_model, prn_input, prn_trace, prn_output, prn_annot;
  double threshold = 0.5;
  add_common(prn, common, false);
  prn->add_option("--risk-model", prn_model, "edge-level risk model")->required();
  prn->add_option("--input", prn_input, "parsed CoNLL-X")->required();
  prn->add_option("--trace", prn_trace, "trace file from parse --trace (needed for edge_state)");
  prn->add_option("--threshold", threshold, "risk threshold R")->check(CLI::Range(0.0, 1.0));
  prn->add_option("--output", prn_output, "pruned CoNLL-X")->required();
  prn->add_option("--annotated-out", prn_annot, "full trees with per-token risk");

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "ensemble agreement risk");
  std::vector<std::string> ens_models;
  std::string ens_input, ens_output, ens_annot;
  int ens_primary = -1;
  add_common(ens, common, false);
  ens->add_option("--models", ens_models, "two or more parser models")->required();
  ens->add_option("--input", ens_input, "CoNLL-X input")->required();
  ens->add_option("--output", ens_output, "agreed-edge partial trees")->required();
  ens->add_option("--annotated-out", ens_annot, "base trees with 0/1 risk");
  ens->add_option("--primary", ens_primary, "index of the base member (default: first EASY_FIRST)");

  // select
  auto* sel = app.add_subcommand("select", "parse selection with (K, R)");
  std::string sel_annot, sel_gold, sel_model, sel_input, sel_trace, sel_selected, sel_rejected, sel_targets;
  std::string sel_test_annot, sel_test_gold;
  int K = 0;
  double sel_threshold = 0.5;
  bool tune = false;
  add_common(sel, common, false);
  sel->add_option("--annotated", sel_annot, "risk-annotated CoNLL-X");
  sel->add_option("--risk-model", sel_model, "risk model (instead of --annotated)");
  sel->add_option("--input", sel_input, "parsed CoNLL-X for --risk-model");
  sel->add_option("--trace", sel_trace, "trace file for --risk-model");
  sel->add_option("--gold", sel_gold, "gold CoNLL-X (required for --tune)");
  sel->add_option("--K", K, "maximum number of risky decisions")->check(CLI::NonNegativeNumber);
  sel->add_option("--threshold", sel_threshold, "risk threshold R")->check(CLI::Range(0.0, 1.0));
  sel->add_flag("--tune", tune, "grid-search (K, R) per precision target on --gold");
  sel->add_option("--targets", sel_targets, "comma-separated precision targets (default 0.89..0.99 by 0.005)");
  sel->add_option("--selected-out", sel_selected, "selected trees");
  sel->add_option("--rejected-out", sel_rejected, "rejected trees");
  sel->add_option("--test-annotated", sel_test_annot, "apply tuned parameters to this annotated file");
  sel->add_option("--test-gold", sel_test_gold, "gold for --test-annotated");

  // eval
  auto* evl = app.add_subcommand("eval", "precision, recall, coverage");
  std::string evl_pred, evl_gold, evl_sweep_annot;
  add_common(evl, common, false);
  evl->add_option("--pred", evl_pred, "predicted (possibly partial) CoNLL-X")->required();
  evl->add_option("--gold", evl_gold, "gold CoNLL-X")->required();
  evl->add_option("--sweep", evl_sweep_annot,
                  "annotated file; print threshold/precision/coverage TSV for R = 0.00..1.00 instead");

  // roc
  auto* roc = app.add_subcommand("roc", "ROC curve of edge risks");
  std::string roc_annot, roc_gold;
  std::size_t roc_n = 101;
  add_common(roc, common, false);
  roc->add_option("--annotated", roc_annot, "risk-annotated CoNLL-X")->required();
  roc->add_option("--gold", roc_gold, "gold CoNLL-X")->required();
  roc->add_option("--n-thresholds", roc_n, "maximum number of emitted points")->check(CLI::Range(2, 1000000));

  // pp-report
  auto* ppr = app.add_subcommand("pp-report", "risk confusion table for one POS tag");
  std::string ppr_annot, ppr_gold, ppr_tag = "IN";
  double ppr_threshold = 0.15;
  add_common(ppr, common, false);
  ppr->add_option("--annotated", ppr_annot, "risk-annotated CoNLL-X")->required();
  ppr->add_option("--gold", ppr_gold, "gold CoNLL-X")->required();
  ppr->add_option("--threshold", ppr_threshold, "risk threshold")->check(CLI::Range(0.0, 1.0));
  ppr->add_option("--tag", ppr_tag, "POS tag of prepositions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  EvalOptions eval_opt;
  eval_opt.excluded_pos = punct_set(common.punct_exclude);

  try {
    if (*gen) {
      const auto trees = generate_treebank(common.seed, gen_n, gen_max_len);
      if (gen_split.empty()) {
        write_conllx(trees, gen_out);
      } else {
        const auto fractions = parse_list(gen_split);
        if (fractions.size() != 4) throw std::invalid_argument("--split needs four fractions");
        const auto parts = split_corpus(trees, fractions, common.seed);
        write_conllx(parts.parser_train, gen_out + ".parser_train.conll");
        write_conllx(parts.risk_train, gen_out + ".risk_train.conll");
        write_conllx(parts.dev, gen_out + ".dev.conll");
        write_conllx(parts.test, gen_out + ".test.conll");
        std::cout << "parser_train\t" << parts.parser_train.size() << "\nrisk_train\t" << parts.risk_train.size()
                  << "\ndev\t" << parts.dev.size() << "\ntest\t" << parts.test.size() << '\n';
      }
    } else if (*trp) {
      const ParserKind kind = parse_parser_kind(trp_kind);
      const auto gold = read_conllx(trp_train);
      if (gold.empty()) throw DataError("training file '" + trp_train + "' has no sentences");
      const ParserModel pm = train_parser(kind, gold, {epochs, common.seed});
      save_parser_model(pm, trp_out);
      std::vector<Sentence> sentences;
      for (const auto& t : gold) sentences.push_back(t.sentence());
      std::vector<DepTree> pred;
      for (auto& p : parse_all(pm, sentences, common.threads)) pred.push_back(std::move(p.tree));
      std::cout << "training_accuracy\t" << format_real(token_accuracy(pred, gold, eval_opt)) << '\n';
    } else if (*prs) {
      const ParserModel pm = load_parser_model(prs_model);
      const auto parsed = parse_all(pm, read_sentences(prs_input), common.threads);
      std::vector<DepTree> trees;
      std::vector<ActionTrace> traces;
      for (const auto& p : parsed) {
        trees.push_back(p.tree);
        if (p.trace) traces.push_back(*p.trace);
      }
      write_conllx(trees, prs_output);
      if (!prs_trace.empty()) {
        if (pm.kind() != ParserKind::EasyFirst) throw std::invalid_argument("--trace needs an EASY_FIRST model");
        write_traces(traces, prs_trace);
      }
    } else if (*trr) {
      const FeatureSet fs = parse_feature_set(trr_fs);
      const ParserModel pm = load_parser_model(trr_parser);
      const auto gold = read_conllx(trr_data);
      const std::size_t overlap = count_overlap(pm, gold);
      if (overlap > max_overlap) {
        throw DataError(std::to_string(overlap) +
                        " risk-training sentences occur in the parser's training data (see --max-overlap)");
      }
      std::vector<Sentence> sentences;
      for (const auto& t : gold) sentences.push_back(t.sentence());
      const auto parsed = parse_all(pm, sentences, common.threads);
      const auto examples = risk_examples_from_parses(parsed, gold, fs);
      if (!trr_examples.empty()) {
        auto out = open_out(trr_examples);
        write_risk_examples(examples, out);
      }
      MaxEntOptions opt;
      opt.l2_sigma = sigma;
      opt.max_iter = max_iter;
      MaxEntTrace trace;
      RiskModel rm{train_maxent(to_labeled(examples), opt, &trace), fs};
      rm.model.metadata()["seed"] = std::to_string(common.seed);
      save_risk_model(rm, trr_out);
      std::size_t risky = 0;
      for (const auto& e : examples) risky += e.label == RiskLabel::Risky;
      std::cout << "examples\t" << examples.size() << "\nrisky_fraction\t"
                << format_real(static_cast<double>(risky) / static_cast<double>(examples.size()))
                << "\niterations\t" << trace.iterations << "\nconverged\t" << (trace.converged ? 1 : 0) << '\n';
    } else if (*prn) {
      const RiskModel rm = load_risk_model(prn_model);
      const auto parsed = load_parsed(prn_input, prn_trace);
      const auto rats = parallel_map<RiskAnnotatedTree>(parsed.size(), common.threads,
                                                        [&](std::size_t i) { return score_risks(rm, parsed[i]); });
      std::vector<PartialDepTree> pruned;
      for (const auto& r : rats) pruned.push_back(prune(r, threshold));
      write_conllx(pruned, prn_output);
      if (!prn_annot.empty()) write_risk_annotated(rats, prn_annot);
      std::size_t total = 0, kept = 0;
      for (const auto& p : pruned) {
        total += p.size();
        kept += p.n_assigned();
      }
      std::cout << "coverage\t" << format_real(total ? static_cast<double>(kept) / static_cast<double>(total) : 0.0)
                << '\n';
    } else if (*ens) {
      EnsembleConfig cfg;
      for (const auto& path : ens_models) cfg.members.push_back(std::make_shared<ParserModel>(load_parser_model(path)));
      if (ens_primary >= 0) cfg.primary = static_cast<std::size_t>(ens_primary);
      if (cfg.members.size() < 2) throw std::invalid_argument("ensemble needs at least two --models");
      const auto sentences = read_sentences(ens_input);
      const auto rats = parallel_map<RiskAnnotatedTree>(sentences.size(), common.threads,
                                                        [&](std::size_t i) { return ensemble_risk(cfg, sentences[i]); });
      std::vector<PartialDepTree> agreed;
      for (const auto& r : rats) agreed.push_back(prune(r, 0.0));
      write_conllx(agreed, ens_output);
      if (!ens_annot.empty()) write_risk_annotated(rats, ens_annot);
    } else if (*sel) {
      std::vector<RiskAnnotatedTree> rats;
      if (!sel_annot.empty()) {
        rats = read_risk_annotated(sel_annot);
      } else if (!sel_model.empty() && !sel_input.empty()) {
        const RiskModel rm = load_risk_model(sel_model);
        const auto parsed = load_parsed(sel_input, sel_trace);
        rats = parallel_map<RiskAnnotatedTree>(parsed.size(), common.threads, [&](std::size_t i) {
          return score_risks(rm, parsed[i], RiskUse::Selection);
        });
      } else {
        throw std::invalid_argument("select needs --annotated or --risk-model with --input");
      }
      if (tune) {
        if (sel_gold.empty()) throw std::invalid_argument("--tune requires --gold");
        const auto gold = read_conllx(sel_gold);
        const auto targets = sel_targets.empty() ? default_precision_targets() : parse_list(sel_targets);
        const auto result = grid_search(rats, gold, targets);
        std::vector<RiskAnnotatedTree> test_rats;
        std::vector<DepTree> test_gold;
        if (!sel_test_annot.empty()) {
          if (sel_test_gold.empty()) throw std::invalid_argument("--test-annotated requires --test-gold");
          test_rats = read_risk_annotated(sel_test_annot);
          test_gold = read_conllx(sel_test_gold);
        }
        std::cout << "target\tK\tR\tdev_precision\tdev_sentence_coverage";
        if (!test_rats.empty()) std::cout << "\ttest_precision\ttest_sentence_coverage";
        std::cout << '\n';
        for (const auto& c : result.choices) {
          std::cout << format_real(c.target);
          if (!c.best) {
            std::cout << "\tunreachable\n";
            continue;
          }
          std::cout << '\t' << c.best->params.max_risky << '\t' << format_real(c.best->params.risk_threshold) << '\t'
                    << format_real(c.best->score.precision) << '\t' << format_real(c.best->score.sentence_coverage);
          if (!test_rats.empty()) {
            const auto s = score_selection(test_rats, test_gold, c.best->params);
            std::cout << '\t' << format_real(s.precision) << '\t' << format_real(s.sentence_coverage);
          }
          std::cout << '\n';
        }
      } else {
        const SelectionParams params{sel_threshold, K};
        const auto result = select_parses(rats, params);
        std::vector<DepTree> selected, rejected;
        for (auto i : result.selected) selected.push_back(rats[i].tree);
        for (auto i : result.rejected) rejected.push_back(rats[i].tree);
        if (!sel_selected.empty()) write_conllx(selected, sel_selected);
        if (!sel_rejected.empty()) write_conllx(rejected, sel_rejected);
        std::cout << "K\tR\tselected\tsentence_coverage";
        if (!sel_gold.empty()) std::cout << "\tprecision";
        std::cout << '\n'
                  << K << '\t' << format_real(sel_threshold) << '\t' << selected.size() << '\t'
                  << format_real(rats.empty() ? 0.0 : sentence_coverage(selected.size(), rats.size()));
        if (!sel_gold.empty()) {
          std::cout << '\t' << format_real(score_selection(rats, read_conllx(sel_gold), params).precision);
        }
        std::cout << '\n';
      }
    } else if (*evl) {
      const auto gold = read_conllx(evl_gold);
      if (!evl_sweep_annot.empty()) {
        const auto rats = read_risk_annotated(evl_sweep_annot);
        std::cout << "threshold\tprecision\tcoverage\n";
        for (int i = 0; i <= 100; ++i) {
          const double r = i / 100.0;
          std::vector<PartialDepTree> pruned;
          for (const auto& rat : rats) pruned.push_back(prune(rat, r));
          const auto rep = evaluate(pruned, gold, eval_opt);
          std::cout << format_real(r) << '\t' << format_real(rep.precision) << '\t' << format_real(rep.coverage)
                    << '\n';
        }
      } else {
        write_report(evaluate(read_conllx_partial(evl_pred), gold, eval_opt), std::cout);
      }
    } else if (*roc) {
      const auto curve =
          roc_curve(scored_decisions(read_risk_annotated(roc_annot), read_conllx(roc_gold), eval_opt), roc_n);
      write_roc_tsv(curve, std::cout);
    } else if (*ppr) {
      write_pp_breakdown(pp_breakdown(read_risk_annotated(ppr_annot), read_conllx(ppr_gold), ppr_threshold, ppr_tag),
                         std::cout);
    }
  } catch (const ModelMismatchError& e) {
    std::cerr << "pbp: model mismatch: " << e.what() << '\n';
    return kExitModel;
  } catch (const FormatError& e) {
    std::cerr << "pbp: format error: " << e.what() << '\n';
    return kExitData;
  } catch (const StructureError& e) {
    std::cerr << "pbp: structure error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "pbp: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pbp: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "pbp: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

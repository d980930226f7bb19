#include "pbp/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "pbp/error.hpp"
#include "pbp/linear_model.hpp"

namespace pbp {

namespace {

void check_aligned(const Sentence& a, const Sentence& b, std::size_t i) {
  if (a.size() != b.size()) {
    throw DataError("sentence " + std::to_string(i + 1) + ": " + std::to_string(a.size()) + " predicted tokens vs " +
                    std::to_string(b.size()) + " gold tokens");
  }
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a.tokens()[t].form != b.tokens()[t].form) {
      throw DataError("sentence " + std::to_string(i + 1) + ", token " + std::to_string(t + 1) +
                      ": predicted and gold forms differ");
    }
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

EvalReport evaluate(const std::vector<PartialDepTree>& pred, const std::vector<DepTree>& gold,
                    const EvalOptions& options) {
  if (pred.size() != gold.size()) {
    throw DataError("predicted corpus has " + std::to_string(pred.size()) + " sentences, gold has " +
                    std::to_string(gold.size()));
  }
  EvalReport r;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    check_aligned(pred[i].sentence(), gold[i].sentence(), i);
    for (int t = 1; t <= static_cast<int>(pred[i].size()); ++t) {
      if (options.excluded_pos.count(gold[i].sentence().token(t).pos)) continue;
      ++r.n_total;
      if (!pred[i].is_assigned(t)) {
        ++r.n_abstained;
        continue;
      }
      ++r.n_assigned;
      if (pred[i].head(t) == gold[i].head(t)) ++r.n_correct;
    }
  }
  r.precision = ratio(r.n_correct, r.n_assigned);
  r.recall = ratio(r.n_correct, r.n_total);
  r.coverage = ratio(r.n_assigned, r.n_total);
  r.accuracy = r.recall;
  return r;
}

double sentence_coverage(std::size_t selected, std::size_t total) {
  if (total == 0) throw std::invalid_argument("sentence coverage of an empty corpus is undefined");
  if (selected > total) throw std::invalid_argument("more sentences selected than exist");
  return static_cast<double>(selected) / static_cast<double>(total);
}

RocCurve roc_curve(const std::vector<ScoredDecision>& decisions, std::size_t n_thresholds) {
  if (n_thresholds < 2) throw std::invalid_argument("a ROC curve needs at least two thresholds");
  std::size_t n_pos = 0, n_neg = 0;  // positive = incorrect decision
  for (const auto& d : decisions) {
    if (std::isnan(d.risk)) throw DataError("NaN risk score");
    (d.correct ? n_neg : n_pos) += 1;
  }
  if (n_pos == 0 || n_neg == 0) throw DataError("ROC needs both correct and incorrect decisions");

  std::vector<ScoredDecision> sorted = decisions;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.risk < b.risk; });

  // Walking up the thresholds unflags one group of tied scores at a time.
  std::vector<RocPoint> full;
  std::size_t flagged_pos = n_pos, flagged_neg = n_neg;
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  full.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  for (std::size_t i = 0; i < sorted.size();) {
    const double score = sorted[i].risk;
    for (; i < sorted.size() && sorted[i].risk == score; ++i) (sorted[i].correct ? flagged_neg : flagged_pos) -= 1;
    full.push_back({score, static_cast<double>(flagged_pos) / np, static_cast<double>(flagged_neg) / nn});
  }

  RocCurve curve;
  for (std::size_t i = 1; i < full.size(); ++i) {
    curve.auc += (full[i - 1].fpr - full[i].fpr) * (full[i - 1].tpr + full[i].tpr) / 2.0;
  }
  if (full.size() <= n_thresholds) {
    curve.points = std::move(full);
  } else {
    const double step = static_cast<double>(full.size() - 1) / static_cast<double>(n_thresholds - 1);
    for (std::size_t j = 0; j < n_thresholds; ++j) {
      curve.points.push_back(full[static_cast<std::size_t>(std::llround(static_cast<double>(j) * step))]);
    }
  }
  return curve;
}

std::vector<ScoredDecision> scored_decisions(const std::vector<RiskAnnotatedTree>& rats,
                                             const std::vector<DepTree>& gold, const EvalOptions& options) {
  if (rats.size() != gold.size()) throw DataError("annotated and gold corpora differ in size");
  std::vector<ScoredDecision> out;
  for (std::size_t i = 0; i < rats.size(); ++i) {
    check_aligned(rats[i].tree.sentence(), gold[i].sentence(), i);
    if (!rats[i].edge_risks) throw std::invalid_argument("sentence " + std::to_string(i + 1) + " has no edge risks");
    for (int t = 1; t <= static_cast<int>(gold[i].size()); ++t) {
      if (options.excluded_pos.count(gold[i].sentence().token(t).pos)) continue;
      out.push_back({(*rats[i].edge_risks)[static_cast<std::size_t>(t - 1)], rats[i].tree.head(t) == gold[i].head(t)});
    }
  }
  return out;
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

PPBreakdown pp_breakdown(const std::vector<RiskAnnotatedTree>& rats, const std::vector<DepTree>& gold,
                         double risk_threshold, const std::string& prep_tag) {
  if (rats.size() != gold.size()) throw DataError("annotated and gold corpora differ in size");
  std::map<std::string, Confusion> by_form;
  PPBreakdown out;
  for (std::size_t i = 0; i < rats.size(); ++i) {
    check_aligned(rats[i].tree.sentence(), gold[i].sentence(), i);
    if (!rats[i].edge_risks) throw std::invalid_argument("sentence " + std::to_string(i + 1) + " has no edge risks");
    for (int t = 1; t <= static_cast<int>(gold[i].size()); ++t) {
      const Token& tok = gold[i].sentence().token(t);
      if (tok.pos != prep_tag) continue;
      const bool risky = (*rats[i].edge_risks)[static_cast<std::size_t>(t - 1)] > risk_threshold;
      const bool correct = rats[i].tree.head(t) == gold[i].head(t);
      Confusion c;
      (risky ? (correct ? c.fp : c.tp) : (correct ? c.tn : c.fn)) = 1;
      std::string form = tok.form;
      for (char& ch : form) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      by_form[form] += c;
      out.overall += c;
    }
  }
  for (auto& [form, c] : by_form) out.rows.push_back({form, c});
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const PPRow& a, const PPRow& b) { return a.counts.total() > b.counts.total(); });
  return out;
}

void write_report(const EvalReport& r, std::ostream& out) {
  out << "tokens\t" << r.n_total << '\n'
      << "assigned\t" << r.n_assigned << '\n'
      << "abstained\t" << r.n_abstained << '\n'
      << "correct\t" << r.n_correct << '\n'
      << "precision\t" << format_real(r.precision) << '\n'
      << "recall\t" << format_real(r.recall) << '\n'
      << "coverage\t" << format_real(r.coverage) << '\n'
      << "accuracy\t" << format_real(r.accuracy) << '\n';
  if (r.sentence_coverage) out << "sentence_coverage\t" << format_real(*r.sentence_coverage) << '\n';
  if (r.n_assigned == 0) out << "note\tprecision set to 0 because no token was assigned\n";
}

void write_roc_tsv(const RocCurve& curve, std::ostream& out) {
  out << "threshold\ttpr\tfpr\n";
  for (const auto& p : curve.points) {
    out << (std::isinf(p.threshold) ? std::string("-inf") : format_real(p.threshold)) << '\t' << format_real(p.tpr)
        << '\t' << format_real(p.fpr) << '\n';
  }
  out << "# auc\t" << format_real(curve.auc) << '\n';
}

void write_pp_breakdown(const PPBreakdown& pp, std::ostream& out) {
  out << "form\tTP\tFP\tTN\tFN\ttotal\n";
  auto row = [&out](const std::string& name, const Confusion& c) {
    out << name << '\t' << c.tp << '\t' << c.fp << '\t' << c.tn << '\t' << c.fn << '\t' << c.total() << '\n';
  };
  row("*ALL*", pp.overall);
  for (const auto& r : pp.rows) row(r.form, r.counts);
}

}  // namespace pbp

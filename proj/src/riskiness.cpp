#include "pbp/riskiness.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pbp/conllx.hpp"
#include "pbp/easy_first.hpp"
#include "pbp/error.hpp"
#include "pbp/features.hpp"

namespace pbp {

std::size_t EnsembleConfig::primary_index() const {
  if (primary) {
    if (*primary >= members.size()) throw std::invalid_argument("primary ensemble member out of range");
    return *primary;
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] && members[i]->kind() == ParserKind::EasyFirst) return i;
  }
  return 0;
}

RiskAnnotatedTree ensemble_risk(const EnsembleConfig& cfg, const Sentence& sentence) {
  if (cfg.members.size() < 2) throw std::invalid_argument("an ensemble needs at least two parsers");
  std::vector<DepTree> trees;
  trees.reserve(cfg.members.size());
  for (const auto& m : cfg.members) {
    if (!m) throw std::logic_error("null ensemble member");
    trees.push_back(parse(*m, sentence).tree);
  }
  const std::size_t base = cfg.primary_index();
  std::vector<double> risks(sentence.size(), 0.0);
  for (std::size_t t = 0; t < sentence.size(); ++t) {
    for (const auto& tree : trees) {
      if (tree.heads()[t] != trees[base].heads()[t]) risks[t] = 1.0;
    }
  }
  return {trees[base], std::move(risks), {}};
}

FeatureVector features_action_process(const ActionTrace& trace, std::size_t step) {
  const TraceStep& s = trace.steps.at(step);
  return FeatureVector::from_entries({
      {"ap_len", static_cast<double>(trace.sentence_length)},
      {"ap_parentless", static_cast<double>(s.n_pending)},
      {"ap_best", s.best_score},
      {"ap_second", s.second_best_score},
      {"ap_margin", s.best_score - s.second_best_score},
  });
}

FeatureVector features_action_state(const TraceStep& step) { return step.state_features; }

FeatureVector features_edge_state(const ActionTrace& trace, int token) {
  const int step = trace.attaching_step(token);
  if (step < 0) throw std::invalid_argument("token " + std::to_string(token) + " was never attached");
  return trace.steps[static_cast<std::size_t>(step)].state_features;
}

FeatureVector features_edge_factored(const Sentence& sentence, const DepTree& predicted, int token) {
  return extract_first_order_features(sentence, predicted.head(token), token);
}

FeatureVector features_edge_higher(const Sentence& sentence, const DepTree& predicted, int token) {
  const int h = predicted.head(token);
  std::vector<std::string> names;
  first_order_feature_names(sentence, h, token, names);

  const auto children = children_of(predicted.heads());
  auto nearest = [&](int parent, int node, bool left) {
    int best = -1;
    for (int c : children[static_cast<std::size_t>(parent)]) {
      if (c == node) continue;
      if (left && c < node) best = c;
      if (!left && c > node && best < 0) best = c;
    }
    return best;
  };
  const int g = h == 0 ? -1 : predicted.head(h);
  const auto& kids = children[static_cast<std::size_t>(token)];
  const int lc = kids.empty() ? -1 : kids.front();
  const int rc = kids.empty() ? -1 : kids.back();

  const std::string& dp = pos_at(sentence, token);
  const std::string& hp = pos_at(sentence, h);
  const std::string& gp = h == 0 ? kRootSymbol : pos_at(sentence, g);
  const std::string& lsib = pos_at(sentence, nearest(h, token, true));
  const std::string& rsib = pos_at(sentence, nearest(h, token, false));
  const std::string& plsib = g < 0 ? kNoneSymbol : pos_at(sentence, nearest(g, h, true));
  const std::string& prsib = g < 0 ? kNoneSymbol : pos_at(sentence, nearest(g, h, false));
  const std::string& lcp = pos_at(sentence, lc);
  const std::string& rcp = pos_at(sentence, rc);

  names.push_back(feat("x_lsib", lsib));
  names.push_back(feat("x_rsib", rsib));
  names.push_back(feat("x_hp_dp_lsib", hp, dp, lsib));
  names.push_back(feat("x_hp_dp_rsib", hp, dp, rsib));
  names.push_back(feat("x_plsib", plsib));
  names.push_back(feat("x_prsib", prsib));
  names.push_back(feat("x_hp_plsib_prsib", hp, plsib, prsib));
  names.push_back(feat("x_lc", lcp));
  names.push_back(feat("x_rc", rcp));
  names.push_back(feat("x_dp_lc_rc", dp, lcp, rcp));
  names.push_back(feat("x_gp", gp));
  names.push_back(feat("x_gp_hp_dp", gp, hp, dp));
  names.push_back(feat("x_nkids", std::to_string(std::min<std::size_t>(kids.size(), 3))));
  // lexical triple for attachment ambiguities: head word, dependent word, dependent's last child word
  names.push_back(feat("x_hw_dw_rcw", form_at(sentence, h), form_at(sentence, token), form_at(sentence, rc)));
  names.push_back(feat("x_hw_dw", form_at(sentence, h), form_at(sentence, token)));
  names.push_back(feat("x_hp_dw_rcw", hp, form_at(sentence, token), form_at(sentence, rc)));
  return FeatureVector::indicators(std::move(names));
}

ExampleKind example_kind(FeatureSet fs) { return is_edge_set(fs) ? ExampleKind::Edge : ExampleKind::Action; }

namespace {

bool needs_trace(FeatureSet fs) { return fs != FeatureSet::EdgeFactored && fs != FeatureSet::EdgeHigher; }

FeatureVector edge_features(FeatureSet fs, const ParseOutput& p, int token) {
  const Sentence& s = p.tree.sentence();
  switch (fs) {
    case FeatureSet::EdgeState: return features_edge_state(*p.trace, token);
    case FeatureSet::EdgeFactored: return features_edge_factored(s, p.tree, token);
    case FeatureSet::EdgeHigher: return features_edge_higher(s, p.tree, token);
    default: throw std::logic_error("not an edge feature set");
  }
}

FeatureVector action_features(FeatureSet fs, const ActionTrace& trace, std::size_t step) {
  if (fs == FeatureSet::ActionProcess) return features_action_process(trace, step);
  return features_action_state(trace.steps[step]);
}

}  // namespace

std::vector<RiskExample> risk_examples_from_parses(const std::vector<ParseOutput>& parsed,
                                                   const std::vector<DepTree>& gold, FeatureSet fs) {
  if (parsed.size() != gold.size()) throw DataError("parsed and gold corpora differ in size");
  std::vector<RiskExample> out;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const ParseOutput& p = parsed[i];
    const DepTree& g = gold[i];
    if (p.tree.sentence() != g.sentence()) {
      throw DataError("sentence " + std::to_string(i + 1) + " differs between parsed and gold input");
    }
    if (needs_trace(fs) && !p.trace) {
      throw std::invalid_argument("feature set " + std::string(to_string(fs)) + " needs easy-first traces");
    }
    if (example_kind(fs) == ExampleKind::Edge) {
      for (int t = 1; t <= static_cast<int>(g.size()); ++t) {
        RiskExample ex;
        ex.features = edge_features(fs, p, t);
        ex.label = p.tree.head(t) == g.head(t) ? RiskLabel::Safe : RiskLabel::Risky;
        ex.kind = ExampleKind::Edge;
        ex.sentence = i;
        ex.index = t;
        out.push_back(std::move(ex));
      }
      continue;
    }
    // Replay the trace against gold to decide which actions were valid.
    std::vector<int> counts(g.size() + 1, 0);
    for (int h : g.heads()) ++counts[static_cast<std::size_t>(h)];
    const Sentence& s = g.sentence();
    EasyFirstState st(s);
    for (std::size_t k = 0; k < p.trace->steps.size(); ++k) {
      const ParserAction& a = p.trace->steps[k].action;
      RiskExample ex;
      ex.features = action_features(fs, *p.trace, k);
      ex.label = easy_first_action_valid(st, a, g.heads(), counts) ? RiskLabel::Safe : RiskLabel::Risky;
      ex.kind = ExampleKind::Action;
      ex.sentence = i;
      ex.index = static_cast<int>(k);
      out.push_back(std::move(ex));
      st.apply(a);
    }
  }
  return out;
}

std::size_t count_overlap(const ParserModel& parser, const std::vector<DepTree>& risk_train) {
  const auto& fps = parser.train_fingerprints();
  std::size_t n = 0;
  for (const auto& t : risk_train) {
    if (std::binary_search(fps.begin(), fps.end(), sentence_fingerprint(t.sentence()))) ++n;
  }
  return n;
}

std::vector<RiskExample> generate_risk_examples(const ParserModel& parser, const std::vector<DepTree>& risk_train,
                                                FeatureSet fs, std::size_t max_overlap) {
  const std::size_t overlap = count_overlap(parser, risk_train);
  if (overlap > max_overlap) {
    throw DataError(std::to_string(overlap) + " risk-training sentences also occur in the parser's training data");
  }
  if (needs_trace(fs) && parser.kind() != ParserKind::EasyFirst) {
    throw std::invalid_argument("feature set " + std::string(to_string(fs)) + " needs an EASY_FIRST parser");
  }
  std::vector<ParseOutput> parsed;
  parsed.reserve(risk_train.size());
  for (const auto& g : risk_train) parsed.push_back(parse(parser, g.sentence()));
  return risk_examples_from_parses(parsed, risk_train, fs);
}

std::vector<LabeledFeatures> to_labeled(const std::vector<RiskExample>& examples) {
  std::vector<LabeledFeatures> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back({e.features, e.label});
  return out;
}

void write_risk_examples(const std::vector<RiskExample>& examples, std::ostream& out) {
  for (const auto& e : examples) {
    out << (e.label == RiskLabel::Risky ? "RISKY" : "SAFE") << '\t';
    bool first = true;
    for (const auto& [name, v] : e.features.entries()) {
      if (name.find_first_of(" \t\n") != std::string::npos) {
        throw FormatError("feature name '" + name + "' contains whitespace");
      }
      if (!first) out << ' ';
      out << name << ':' << format_real(v);
      first = false;
    }
    out << '\n';
  }
}

std::vector<LabeledFeatures> read_risk_examples(std::istream& in) {
  std::vector<LabeledFeatures> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    const std::string label = line.substr(0, tab);
    LabeledFeatures lf;
    if (label == "RISKY") {
      lf.label = RiskLabel::Risky;
    } else if (label == "SAFE") {
      lf.label = RiskLabel::Safe;
    } else {
      throw FormatError("line " + std::to_string(line_no) + ": unknown label '" + label + "'");
    }
    std::vector<FeatureVector::Entry> entries;
    if (tab != std::string::npos) {
      std::istringstream fields(line.substr(tab + 1));
      std::string f;
      while (fields >> f) {
        const std::size_t colon = f.rfind(':');
        if (colon == std::string::npos || colon == 0) {
          throw FormatError("line " + std::to_string(line_no) + ": malformed feature '" + f + "'");
        }
        try {
          entries.emplace_back(f.substr(0, colon), parse_real(f.substr(colon + 1)));
        } catch (const FormatError&) {
          throw FormatError("line " + std::to_string(line_no) + ": bad value in '" + f + "'");
        }
      }
    }
    lf.features = FeatureVector::from_entries(std::move(entries));
    out.push_back(std::move(lf));
  }
  return out;
}

RiskAnnotatedTree score_risks(const RiskModel& rm, const ParseOutput& parsed, RiskUse use) {
  const FeatureSet fs = rm.feature_set;
  if (needs_trace(fs) && !parsed.trace) {
    throw std::invalid_argument("feature set " + std::string(to_string(fs)) + " needs an easy-first trace");
  }
  RiskAnnotatedTree out{parsed.tree, std::nullopt, {}};
  if (is_edge_set(fs)) {
    std::vector<double> risks;
    risks.reserve(parsed.tree.size());
    for (int t = 1; t <= static_cast<int>(parsed.tree.size()); ++t) {
      risks.push_back(predict_risk(rm, edge_features(fs, parsed, t)));
    }
    out.edge_risks = std::move(risks);
    return out;
  }
  if (use == RiskUse::Pruning) {
    throw ModelMismatchError("action-level risk model (" + std::string(to_string(fs)) +
                             ") can only be used for parse selection");
  }
  for (std::size_t k = 0; k < parsed.trace->steps.size(); ++k) {
    out.action_risks.push_back(predict_risk(rm, action_features(fs, *parsed.trace, k)));
  }
  return out;
}

void write_risk_annotated(const std::vector<RiskAnnotatedTree>& trees, std::ostream& out) {
  for (const auto& rat : trees) {
    if (!rat.action_risks.empty()) {
      out << "# action_risks=";
      for (std::size_t k = 0; k < rat.action_risks.size(); ++k) {
        out << (k ? "," : "") << format_real(rat.action_risks[k]);
      }
      out << '\n';
    }
    for (int t = 1; t <= static_cast<int>(rat.tree.size()); ++t) {
      const std::string feats = rat.edge_risks ? "risk=" + format_real((*rat.edge_risks)[static_cast<std::size_t>(t - 1)]) : "_";
      detail::write_line(out, rat.tree.sentence().token(t), std::to_string(rat.tree.head(t)), feats);
    }
    out << '\n';
  }
}

void write_risk_annotated(const std::vector<RiskAnnotatedTree>& trees, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_risk_annotated(trees, out);
  if (!out) throw DataError("write failed: " + path);
}

std::vector<RiskAnnotatedTree> read_risk_annotated(std::istream& in) {
  std::vector<RiskAnnotatedTree> out;
  const auto raw = detail::read_raw(in);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& rs = raw[i];
    const std::string where = "sentence " + std::to_string(i + 1) + " (line " + std::to_string(rs.first_line) + ")";
    std::vector<Token> tokens;
    std::vector<int> heads;
    std::vector<double> risks;
    std::size_t with_risk = 0;
    for (const auto& rt : rs.tokens) {
      tokens.push_back(rt.token);
      try {
        heads.push_back(std::stoi(rt.head));
      } catch (const std::logic_error&) {
        throw FormatError(where + ": HEAD '" + rt.head + "' is not an integer");
      }
      if (rt.feats.rfind("risk=", 0) == 0) {
        try {
          risks.push_back(parse_real(rt.feats.substr(5)));
        } catch (const FormatError&) {
          throw FormatError(where + ": bad risk value '" + rt.feats + "'");
        }
        if (!(risks.back() >= 0.0 && risks.back() <= 1.0)) throw FormatError(where + ": risk outside [0,1]");
        ++with_risk;
      }
    }
    if (with_risk != 0 && with_risk != rs.tokens.size()) {
      throw FormatError(where + ": risk values present on only some tokens");
    }
    RiskAnnotatedTree rat;
    rat.tree = DepTree(Sentence(std::move(tokens)), std::move(heads));
    if (with_risk) rat.edge_risks = std::move(risks);
    for (const auto& c : rs.comments) {
      const std::string key = " action_risks=";
      if (c.rfind(key, 0) != 0) continue;
      std::istringstream vals(c.substr(key.size()));
      std::string v;
      while (std::getline(vals, v, ',')) {
        try {
          rat.action_risks.push_back(parse_real(v));
        } catch (const FormatError&) {
          throw FormatError(where + ": bad action risk '" + v + "'");
        }
      }
    }
    out.push_back(std::move(rat));
  }
  return out;
}

std::vector<RiskAnnotatedTree> read_risk_annotated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return read_risk_annotated(in);
}

}  // namespace pbp

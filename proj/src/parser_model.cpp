#include "pbp/parser_model.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pbp/easy_first.hpp"
#include "pbp/error.hpp"
#include "pbp/features.hpp"

namespace pbp {

std::string_view to_string(ParserKind kind) {
  switch (kind) {
    case ParserKind::EasyFirst: return "EASY_FIRST";
    case ParserKind::ShiftReduce: return "SHIFT_REDUCE";
    case ParserKind::Mst1: return "MST1";
  }
  return "?";
}

ParserKind parse_parser_kind(std::string_view name) {
  std::string up(name);
  for (char& c : up) {
    c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (up == "EASY_FIRST") return ParserKind::EasyFirst;
  if (up == "SHIFT_REDUCE") return ParserKind::ShiftReduce;
  if (up == "MST1" || up == "MST") return ParserKind::Mst1;
  throw std::invalid_argument("unknown parser kind '" + std::string(name) + "'");
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::AttachLeft: return "ATTACH_LEFT";
    case ActionKind::AttachRight: return "ATTACH_RIGHT";
    case ActionKind::Shift: return "SHIFT";
    case ActionKind::LeftArc: return "LEFT_ARC";
    case ActionKind::RightArc: return "RIGHT_ARC";
  }
  return "?";
}

int ActionTrace::attaching_step(int token) const {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& e = steps[i].action.produced_edge;
    if (e && e->second == token) return static_cast<int>(i);
  }
  return -1;
}

ParserModel::ParserModel(ParserKind kind, MulticlassWeights weights, std::unordered_set<std::string> vocabulary,
                         std::vector<std::uint64_t> train_fingerprints, TrainOptions options)
    : trained_(true),
      kind_(kind),
      weights_(std::move(weights)),
      vocabulary_(std::move(vocabulary)),
      fingerprints_(std::move(train_fingerprints)),
      options_(options) {
  std::sort(fingerprints_.begin(), fingerprints_.end());
  fingerprints_.erase(std::unique(fingerprints_.begin(), fingerprints_.end()), fingerprints_.end());
}

Sentence ParserModel::normalize(const Sentence& s) const {
  std::vector<Token> tokens = s.tokens();
  for (auto& t : tokens) {
    if (!vocabulary_.count(t.form)) t.form = kUnknownForm;
  }
  return Sentence(std::move(tokens));
}

namespace {

const std::vector<std::string>& class_tags_for(ParserKind kind) {
  static const std::vector<std::string> kNone;
  switch (kind) {
    case ParserKind::EasyFirst: return easy_first_class_tags();
    case ParserKind::ShiftReduce: return shift_reduce_class_tags();
    default: return kNone;
  }
}

// Metadata values may not hold '=', tabs or newlines; forms are joined by spaces.
std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '%' || c == '=' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

std::string_view feature_template_version(ParserKind kind) {
  switch (kind) {
    case ParserKind::EasyFirst: return "ef1";
    case ParserKind::ShiftReduce: return "sr1";
    case ParserKind::Mst1: return "mst1";
  }
  return "?";
}

LinearModel ParserModel::to_linear_model() const {
  if (!trained_) throw std::logic_error("cannot export an untrained parser model");
  LinearModel m = weights_.to_linear_model(class_tags_for(kind_));
  auto& md = m.metadata();
  md["parser_kind"] = std::string(to_string(kind_));
  md["template_version"] = std::string(feature_template_version(kind_));
  md["epochs"] = std::to_string(options_.epochs);
  md["seed"] = std::to_string(options_.seed);
  std::vector<std::string> vocab(vocabulary_.begin(), vocabulary_.end());
  std::sort(vocab.begin(), vocab.end());
  std::string joined;
  for (const auto& v : vocab) {
    if (!joined.empty()) joined.push_back(' ');
    joined += escape(v);
  }
  md["vocab"] = joined;
  std::string fps;
  for (auto fp : fingerprints_) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fp);
    if (!fps.empty()) fps.push_back(',');
    fps += buf;
  }
  md["train_fingerprints"] = fps;
  return m;
}

ParserModel ParserModel::from_linear_model(const LinearModel& model) {
  if (model.kind() != ModelKind::PerceptronAveraged) {
    throw ModelMismatchError("expected a parser model, got a " + std::string(to_string(model.kind())) + " model");
  }
  ParserKind kind;
  try {
    kind = parse_parser_kind(model.require("parser_kind"));
  } catch (const std::invalid_argument& e) {
    throw ModelMismatchError(e.what());
  }
  const std::string& version = model.require("template_version");
  if (version != feature_template_version(kind)) {
    throw ModelMismatchError("feature template version '" + version + "' does not match this build ('" +
                             std::string(feature_template_version(kind)) + "')");
  }
  TrainOptions opt;
  try {
    opt.epochs = std::stoi(model.require("epochs"));
    opt.seed = std::stoull(model.require("seed"));
  } catch (const std::logic_error&) {
    throw ModelMismatchError("malformed training options in parser model");
  }
  std::unordered_set<std::string> vocab;
  for (const auto& v : split_on(model.require("vocab"), ' ')) vocab.insert(unescape(v));
  std::vector<std::uint64_t> fps;
  for (const auto& f : split_on(model.require("train_fingerprints"), ',')) {
    try {
      fps.push_back(std::stoull(f, nullptr, 16));
    } catch (const std::logic_error&) {
      throw ModelMismatchError("malformed fingerprint '" + f + "'");
    }
  }
  return ParserModel(kind, MulticlassWeights::from_linear_model(model, class_tags_for(kind)), std::move(vocab),
                     std::move(fps), opt);
}

void save_parser_model(const ParserModel& model, const std::string& path) {
  save_model(model.to_linear_model(), path);
}

ParserModel load_parser_model(const std::string& path) { return ParserModel::from_linear_model(load_model(path)); }

std::unordered_set<std::string> build_vocabulary(const std::vector<DepTree>& gold) {
  std::unordered_map<std::string, int> counts;
  for (const auto& t : gold) {
    for (const auto& tok : t.sentence().tokens()) ++counts[tok.form];
  }
  std::unordered_set<std::string> vocab;
  for (const auto& [form, c] : counts) {
    if (c >= 2) vocab.insert(form);
  }
  return vocab;
}

std::vector<std::uint64_t> corpus_fingerprints(const std::vector<DepTree>& trees) {
  std::vector<std::uint64_t> out;
  out.reserve(trees.size());
  for (const auto& t : trees) out.push_back(sentence_fingerprint(t.sentence()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ParserModel train_parser(ParserKind kind, const std::vector<DepTree>& gold, const TrainOptions& options) {
  switch (kind) {
    case ParserKind::EasyFirst: return train_easy_first(gold, options);
    case ParserKind::ShiftReduce: return train_shift_reduce(gold, options);
    case ParserKind::Mst1: return train_mst1(gold, options);
  }
  throw std::invalid_argument("unknown parser kind");
}

ParseOutput parse(const ParserModel& pm, const Sentence& sentence) {
  switch (pm.kind()) {
    case ParserKind::EasyFirst: {
      auto out = easy_first_parse(pm, sentence);
      return {std::move(out.tree), std::move(out.trace)};
    }
    case ParserKind::ShiftReduce: return {shift_reduce_parse(pm, sentence).tree, std::nullopt};
    case ParserKind::Mst1: return {eisner_parse(pm, sentence), std::nullopt};
  }
  throw std::logic_error("unknown parser kind");
}

}  // namespace pbp

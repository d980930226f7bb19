#include "pbp/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "pbp/error.hpp"

namespace pbp {

namespace {

constexpr std::string_view kMagic = "pbp-linear-model";
constexpr std::string_view kVersion = "v1";

void check_name(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("feature names must be nonempty");
}

}  // namespace

FeatureVector FeatureVector::indicators(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  FeatureVector fv;
  fv.entries_.reserve(names.size());
  for (auto& n : names) {
    check_name(n);
    fv.entries_.emplace_back(std::move(n), 1.0);
  }
  return fv;
}

FeatureVector FeatureVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  FeatureVector fv;
  for (auto& e : entries) {
    check_name(e.first);
    if (!fv.entries_.empty() && fv.entries_.back().first == e.first) {
      fv.entries_.back().second += e.second;
    } else {
      fv.entries_.push_back(std::move(e));
    }
  }
  std::erase_if(fv.entries_, [](const Entry& e) { return e.second == 0.0; });
  return fv;
}

double FeatureVector::value(std::string_view name) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                             [](const Entry& e, std::string_view n) { return e.first < n; });
  return it != entries_.end() && it->first == name ? it->second : 0.0;
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::MaxEnt ? "MAXENT" : "PERCEPTRON_AVERAGED";
}

void LinearModel::set_weight(const std::string& name, double w) {
  check_name(name);
  if (w == 0.0) {
    weights_.erase(name);
  } else {
    weights_[name] = w;
  }
}

double LinearModel::weight(const std::string& name) const {
  auto it = weights_.find(name);
  return it == weights_.end() ? 0.0 : it->second;
}

const std::string& LinearModel::require(const std::string& key) const {
  auto it = metadata_.find(key);
  if (it == metadata_.end()) throw ModelMismatchError("model is missing metadata key '" + key + "'");
  return it->second;
}

double score(const LinearModel& model, const FeatureVector& fv) {
  double s = model.bias();
  const auto& w = model.weights();
  for (const auto& [name, value] : fv.entries()) {
    auto it = w.find(name);
    if (it != w.end()) s += it->second * value;
  }
  return s;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw FormatError("'" + s + "' is not a number");
  return v;
}

void save_model(const LinearModel& model, std::ostream& out) {
  out << kMagic << '\t' << kVersion << "\tkind=" << to_string(model.kind());
  for (const auto& [k, v] : model.metadata()) {
    if (k.find_first_of("\t\n=") != std::string::npos || v.find_first_of("\t\n") != std::string::npos) {
      throw std::invalid_argument("metadata entry '" + k + "' contains a tab, newline or '='");
    }
    out << '\t' << k << '=' << v;
  }
  out << '\n';
  std::vector<const std::pair<const std::string, double>*> entries;
  entries.reserve(model.weights().size());
  for (const auto& e : model.weights()) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->first < b->first; });
  for (const auto* e : entries) {
    if (e->first.find_first_of("\t\n") != std::string::npos) {
      throw std::invalid_argument("feature name contains a tab or newline");
    }
    out << e->first << '\t' << format_real(e->second) << '\n';
  }
}

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  save_model(model, out);
  if (!out) throw DataError("failed writing '" + path + "'");
}

LinearModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ModelMismatchError("empty model file");
  std::vector<std::string> fields;
  for (std::size_t start = 0;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (fields.size() < 3 || fields[0] != kMagic) throw ModelMismatchError("not a pbp model file (bad header)");
  if (fields[1] != kVersion) {
    throw ModelMismatchError("unsupported model version '" + fields[1] + "' (expected " + std::string(kVersion) + ")");
  }
  LinearModel model;
  if (fields[2] == "kind=MAXENT") {
    model = LinearModel(ModelKind::MaxEnt);
  } else if (fields[2] == "kind=PERCEPTRON_AVERAGED") {
    model = LinearModel(ModelKind::PerceptronAveraged);
  } else {
    throw ModelMismatchError("unknown model kind field '" + fields[2] + "'");
  }
  for (std::size_t i = 3; i < fields.size(); ++i) {
    const std::size_t eq = fields[i].find('=');
    if (eq == std::string::npos) throw FormatError("model header field '" + fields[i] + "' lacks '='");
    model.metadata()[fields[i].substr(0, eq)] = fields[i].substr(eq + 1);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw FormatError("model line " + std::to_string(line_no) + ": expected feature<TAB>weight");
    }
    double w;
    try {
      w = parse_real(std::string_view(line).substr(tab + 1));
    } catch (const FormatError&) {
      throw FormatError("model line " + std::to_string(line_no) + ": bad weight");
    }
    model.set_weight(line.substr(0, tab), w);
  }
  return model;
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model '" + path + "'");
  return load_model(in);
}

}  // namespace pbp

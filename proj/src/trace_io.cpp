#include "pbp/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pbp/error.hpp"
#include "pbp/linear_model.hpp"

namespace pbp {

ActionKind parse_action_kind(const std::string& name) {
  for (ActionKind k : {ActionKind::AttachLeft, ActionKind::AttachRight, ActionKind::Shift, ActionKind::LeftArc,
                       ActionKind::RightArc}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown action kind '" + name + "'");
}

void write_traces(const std::vector<ActionTrace>& traces, std::ostream& out) {
  for (const auto& tr : traces) {
    out << "sentence\t" << tr.sentence_length << '\n';
    for (const auto& s : tr.steps) {
      const auto edge = s.action.produced_edge;
      out << to_string(s.action.kind) << '\t' << s.action.position << '\t' << (edge ? edge->first : -1) << '\t'
          << (edge ? edge->second : -1) << '\t' << format_real(s.best_score) << '\t'
          << format_real(s.second_best_score) << '\t' << s.n_pending << '\t';
      bool first = true;
      for (const auto& [name, v] : s.state_features.entries()) {
        if (name.find_first_of(" \t\n") != std::string::npos) {
          throw FormatError("feature name '" + name + "' contains whitespace");
        }
        if (!first) out << ' ';
        out << name << ':' << format_real(v);
        first = false;
      }
      out << '\n';
    }
    out << '\n';
  }
}

void write_traces(const std::vector<ActionTrace>& traces, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_traces(traces, out);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::istringstream in(line);
  std::string c;
  while (std::getline(in, c, '\t')) cols.push_back(c);
  if (!line.empty() && line.back() == '\t') cols.emplace_back();
  return cols;
}

int to_int(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw FormatError("trace line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
}

}  // namespace

std::vector<ActionTrace> read_traces(std::istream& in) {
  std::vector<ActionTrace> out;
  std::string line;
  std::size_t line_no = 0;
  bool open = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      open = false;
      continue;
    }
    const auto cols = split_tabs(line);
    if (cols[0] == "sentence") {
      if (cols.size() != 2) throw FormatError("trace line " + std::to_string(line_no) + ": malformed header");
      out.emplace_back();
      out.back().sentence_length = to_int(cols[1], line_no);
      open = true;
      continue;
    }
    if (!open) throw FormatError("trace line " + std::to_string(line_no) + ": step outside a sentence block");
    if (cols.size() != 8) {
      throw FormatError("trace line " + std::to_string(line_no) + ": expected 8 tab-separated fields");
    }
    TraceStep step;
    try {
      step.action.kind = parse_action_kind(cols[0]);
      step.best_score = parse_real(cols[4]);
      step.second_best_score = parse_real(cols[5]);
    } catch (const std::exception& e) {
      throw FormatError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    step.action.position = to_int(cols[1], line_no);
    const int h = to_int(cols[2], line_no), d = to_int(cols[3], line_no);
    if (d >= 0) step.action.produced_edge = std::pair{h, d};
    step.n_pending = to_int(cols[6], line_no);
    std::vector<FeatureVector::Entry> entries;
    std::istringstream fs(cols[7]);
    std::string f;
    while (fs >> f) {
      const std::size_t colon = f.rfind(':');
      if (colon == std::string::npos || colon == 0) {
        throw FormatError("trace line " + std::to_string(line_no) + ": malformed feature '" + f + "'");
      }
      entries.emplace_back(f.substr(0, colon), parse_real(f.substr(colon + 1)));
    }
    step.state_features = FeatureVector::from_entries(std::move(entries));
    out.back().steps.push_back(std::move(step));
  }
  return out;
}

std::vector<ActionTrace> read_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return read_traces(in);
}

}  // namespace pbp

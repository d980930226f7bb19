#include "pbp/conllx.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "pbp/error.hpp"

namespace pbp {
namespace detail {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

bool parse_int(const std::string& s, int& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw FormatError("line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

std::vector<RawSentence> read_raw(std::istream& in) {
  std::vector<RawSentence> out;
  RawSentence cur;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!cur.tokens.empty()) out.push_back(std::move(cur));
    cur = RawSentence{};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      if (!cur.tokens.empty()) fail(line_no, "comment line inside a sentence");
      cur.comments.push_back(line.substr(1));
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() < 8) fail(line_no, "expected at least 8 tab-separated columns, found " + std::to_string(cols.size()));
    if (cols[0].find_first_of("-.") != std::string::npos) {
      fail(line_no, "multiword/empty-node ID '" + cols[0] + "' is not supported");
    }
    int id = 0;
    if (!parse_int(cols[0], id)) fail(line_no, "ID column '" + cols[0] + "' is not an integer");
    if (id != static_cast<int>(cur.tokens.size()) + 1) {
      fail(line_no, "expected token ID " + std::to_string(cur.tokens.size() + 1) + ", found " + cols[0]);
    }
    if (cols[1].empty()) fail(line_no, "empty FORM");
    if (cols[3].empty()) fail(line_no, "empty CPOSTAG");
    if (cur.tokens.empty()) cur.first_line = line_no;
    RawToken t;
    t.token = Token{id, cols[1], cols[3], cols[4].empty() ? cols[3] : cols[4]};
    t.feats = cols[5];
    t.head = cols[6];
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return out;
}

void write_line(std::ostream& out, const Token& t, const std::string& head, const std::string& feats) {
  out << t.index << '\t' << t.form << "\t_\t" << t.pos << '\t' << t.fine_pos << '\t' << feats << '\t'
      << head << "\t_\t_\t_\n";
}

}  // namespace detail

namespace {

template <typename Tree>
std::vector<Tree> read_trees(std::istream& in, bool allow_abstain) {
  std::vector<Tree> trees;
  const auto raw = detail::read_raw(in);
  trees.reserve(raw.size());
  for (std::size_t s = 0; s < raw.size(); ++s) {
    std::vector<Token> tokens;
    std::vector<int> heads;
    for (std::size_t i = 0; i < raw[s].tokens.size(); ++i) {
      const auto& rt = raw[s].tokens[i];
      tokens.push_back(rt.token);
      const std::size_t line_no = raw[s].first_line + i;
      if (rt.head == "_") {
        if (!allow_abstain) {
          throw FormatError("line " + std::to_string(line_no) + ": HEAD '_' (abstention) in a file of full trees");
        }
        heads.push_back(kAbstained);
        continue;
      }
      int h = 0;
      const char* end = rt.head.data() + rt.head.size();
      auto [ptr, ec] = std::from_chars(rt.head.data(), end, h);
      if (ec != std::errc() || ptr != end || h < 0) {
        throw FormatError("line " + std::to_string(line_no) + ": HEAD column '" + rt.head + "' is not a valid index");
      }
      heads.push_back(h);
    }
    try {
      trees.emplace_back(Sentence(std::move(tokens)), std::move(heads));
    } catch (const StructureError& e) {
      throw StructureError("sentence " + std::to_string(s + 1) + " (line " +
                           std::to_string(raw[s].first_line) + "): " + e.what());
    }
  }
  return trees;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::vector<DepTree> read_conllx(std::istream& in) { return read_trees<DepTree>(in, false); }

std::vector<DepTree> read_conllx(const std::string& path) {
  auto in = open_in(path);
  return read_conllx(in);
}

std::vector<PartialDepTree> read_conllx_partial(std::istream& in) {
  return read_trees<PartialDepTree>(in, true);
}

std::vector<PartialDepTree> read_conllx_partial(const std::string& path) {
  auto in = open_in(path);
  return read_conllx_partial(in);
}

void write_conllx(const std::vector<PartialDepTree>& trees, std::ostream& out) {
  for (const auto& tree : trees) {
    for (const Token& t : tree.sentence().tokens()) {
      const int h = tree.head(t.index);
      detail::write_line(out, t, h == kAbstained ? std::string("_") : std::to_string(h), "_");
    }
    out << '\n';
  }
}

void write_conllx(const std::vector<PartialDepTree>& trees, const std::string& path) {
  auto out = open_out(path);
  write_conllx(trees, out);
  if (!out) throw DataError("failed writing '" + path + "'");
}

void write_conllx(const std::vector<DepTree>& trees, const std::string& path) {
  write_conllx(std::vector<PartialDepTree>(trees.begin(), trees.end()), path);
}

}  // namespace pbp

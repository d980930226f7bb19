#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbp/treebank.hpp"

namespace pbp {

// Columns read: ID, FORM, CPOSTAG, POSTAG, HEAD. Lines starting with '#' are skipped.
// Throws FormatError (with line number) or StructureError (with sentence number).
std::vector<DepTree> read_conllx(const std::string& path);
std::vector<DepTree> read_conllx(std::istream& in);

// As read_conllx, but HEAD "_" is accepted as an abstention.
std::vector<PartialDepTree> read_conllx_partial(const std::string& path);
std::vector<PartialDepTree> read_conllx_partial(std::istream& in);

// 10-column CoNLL-X; abstained heads are written as "_", DEPREL is always "_".
void write_conllx(const std::vector<PartialDepTree>& trees, const std::string& path);
void write_conllx(const std::vector<PartialDepTree>& trees, std::ostream& out);
void write_conllx(const std::vector<DepTree>& trees, const std::string& path);

namespace detail {

struct RawToken {
  Token token;
  std::string head;   // raw HEAD column
  std::string feats;  // raw FEATS column
};

struct RawSentence {
  std::vector<RawToken> tokens;
  std::vector<std::string> comments;  // '#' lines preceding the sentence, without the '#'
  std::size_t first_line = 0;
};

std::vector<RawSentence> read_raw(std::istream& in);
void write_line(std::ostream& out, const Token& t, const std::string& head, const std::string& feats);

}  // namespace detail

}  // namespace pbp

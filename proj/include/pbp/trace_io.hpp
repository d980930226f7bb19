#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbp/parser_types.hpp"

namespace pbp {

// One block per sentence: "sentence<TAB>n", then one line per step
// "kind<TAB>position<TAB>head<TAB>dep<TAB>best<TAB>second<TAB>n_pending<TAB>name:value ...",
// blocks separated by a blank line.
void write_traces(const std::vector<ActionTrace>& traces, std::ostream& out);
void write_traces(const std::vector<ActionTrace>& traces, const std::string& path);

// Throws FormatError with the offending line number.
std::vector<ActionTrace> read_traces(std::istream& in);
std::vector<ActionTrace> read_traces(const std::string& path);

ActionKind parse_action_kind(const std::string& name);  // throws std::invalid_argument

}  // namespace pbp

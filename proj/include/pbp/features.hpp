#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pbp/linear_model.hpp"
#include "pbp/treebank.hpp"

namespace pbp {

inline const std::string kRootSymbol = "<ROOT>";
inline const std::string kNoneSymbol = "<NONE>";
inline const std::string kUnknownForm = "<UNK>";

// Distance bins 1,2,3,4,5,6-10,>10.
std::string_view distance_bin(int distance);

// Form/POS of node 0..n with <ROOT> for 0 and <NONE> outside the sentence.
const std::string& form_at(const Sentence& s, int index);
const std::string& pos_at(const Sentence& s, int index);

// Edge-factored templates for the arc head -> dep, appended as names (may repeat).
// Throws std::out_of_range for invalid indices.
void first_order_feature_names(const Sentence& s, int head, int dep, std::vector<std::string>& out);

FeatureVector extract_first_order_features(const Sentence& s, int head, int dep);

// Joins parts with '|', prefixed by the template name and '='.
template <typename... Parts>
std::string feat(std::string_view templ, const Parts&... parts) {
  std::string out;
  out.reserve(templ.size() + 1 + (std::string_view(parts).size() + ... + 0) + sizeof...(parts));
  out.append(templ);
  out.push_back('=');
  bool first = true;
  ((out.append(first ? "" : "|"), out.append(std::string_view(parts)), first = false), ...);
  return out;
}

}  // namespace pbp

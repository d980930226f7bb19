#include "pbp/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace pbp {

std::string_view distance_bin(int distance) {
  static constexpr std::string_view kBins[] = {"0", "1", "2", "3", "4", "5"};
  if (distance <= 5) return kBins[std::max(distance, 0)];
  return distance <= 10 ? "6-10" : ">10";
}

const std::string& form_at(const Sentence& s, int index) {
  if (index == 0) return kRootSymbol;
  if (index < 0 || index > static_cast<int>(s.size())) return kNoneSymbol;
  return s.token(index).form;
}

const std::string& pos_at(const Sentence& s, int index) {
  if (index == 0) return kRootSymbol;
  if (index < 0 || index > static_cast<int>(s.size())) return kNoneSymbol;
  return s.token(index).pos;
}

void first_order_feature_names(const Sentence& s, int head, int dep, std::vector<std::string>& out) {
  const int n = static_cast<int>(s.size());
  if (head < 0 || head > n || dep < 1 || dep > n || head == dep) {
    throw std::out_of_range("arc " + std::to_string(head) + "->" + std::to_string(dep) +
                            " is out of range for a sentence of length " + std::to_string(n));
  }
  const std::string& hw = form_at(s, head);
  const std::string& hp = pos_at(s, head);
  const std::string& dw = form_at(s, dep);
  const std::string& dp = pos_at(s, dep);
  const int lo = std::min(head, dep);
  const int hi = std::max(head, dep);
  // Neighbours of the head/dependent; the root has no left neighbour.
  const std::string& hp_l = head == 0 ? kNoneSymbol : pos_at(s, head - 1);
  const std::string& hp_r = pos_at(s, head + 1);
  const std::string& dp_l = pos_at(s, dep - 1);
  const std::string& dp_r = pos_at(s, dep + 1);

  const std::size_t start = out.size();
  out.push_back(feat("hw", hw));
  out.push_back(feat("hp", hp));
  out.push_back(feat("hwp", hw, hp));
  out.push_back(feat("dw", dw));
  out.push_back(feat("dp", dp));
  out.push_back(feat("dwp", dw, dp));
  out.push_back(feat("hwp_dwp", hw, hp, dw, dp));
  out.push_back(feat("hp_dwp", hp, dw, dp));
  out.push_back(feat("hw_dwp", hw, dw, dp));
  out.push_back(feat("hwp_dp", hw, hp, dp));
  out.push_back(feat("hwp_dw", hw, hp, dw));
  out.push_back(feat("hw_dw", hw, dw));
  out.push_back(feat("hp_dp", hp, dp));
  for (int k = lo + 1; k < hi; ++k) out.push_back(feat("hp_bp_dp", hp, pos_at(s, k), dp));
  out.push_back(feat("hp_hpr_dpl_dp", hp, hp_r, dp_l, dp));
  out.push_back(feat("hpl_hp_dpl_dp", hp_l, hp, dp_l, dp));
  out.push_back(feat("hp_hpr_dp_dpr", hp, hp_r, dp, dp_r));
  out.push_back(feat("hpl_hp_dp_dpr", hp_l, hp, dp, dp_r));

  // Every template again, conjoined with arc direction and binned distance.
  const std::string_view dir = head < dep ? "R" : "L";
  const std::string dd = std::string(dir) + std::string(distance_bin(hi - lo));
  const std::size_t end = out.size();
  for (std::size_t i = start; i < end; ++i) out.push_back(feat("dd", dd, out[i]));
  out.push_back(feat("dir_dist", dd));
}

FeatureVector extract_first_order_features(const Sentence& s, int head, int dep) {
  std::vector<std::string> names;
  first_order_feature_names(s, head, dep, names);
  return FeatureVector::indicators(std::move(names));
}

}  // namespace pbp

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pbp {

// Sparse string-keyed feature values, kept sorted by name with no zero entries.
class FeatureVector {
 public:
  using Entry = std::pair<std::string, double>;

  FeatureVector() = default;

  // Indicator features; repeated names collapse to a single 1.0 entry.
  static FeatureVector indicators(std::vector<std::string> names);
  // Real-valued features; repeated names are summed, zero results dropped.
  static FeatureVector from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // 0 when absent.
  double value(std::string_view name) const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

enum class ModelKind { PerceptronAveraged, MaxEnt };

std::string_view to_string(ModelKind kind);

inline constexpr std::string_view kBiasFeature = "__BIAS__";

class LinearModel {
 public:
  LinearModel() = default;
  explicit LinearModel(ModelKind kind) : kind_(kind) {}

  ModelKind kind() const { return kind_; }

  // Zero weights are not stored.
  void set_weight(const std::string& name, double w);
  double weight(const std::string& name) const;
  double bias() const { return weight(std::string(kBiasFeature)); }
  const std::unordered_map<std::string, double>& weights() const { return weights_; }

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  // Throws ModelMismatchError when the key is missing.
  const std::string& require(const std::string& key) const;

 private:
  ModelKind kind_ = ModelKind::PerceptronAveraged;
  std::unordered_map<std::string, double> weights_;
  std::map<std::string, std::string> metadata_;
};

// Bias plus the dot product over features present in the model.
double score(const LinearModel& model, const FeatureVector& fv);

// Versioned text format: header line with kind and metadata, then one
// "feature<TAB>weight" line per entry (sorted, 17 significant digits).
void save_model(const LinearModel& model, const std::string& path);
void save_model(const LinearModel& model, std::ostream& out);
LinearModel load_model(const std::string& path);
LinearModel load_model(std::istream& in);

// 17 significant digits, so parse_real(format_real(v)) == v.
std::string format_real(double v);
double parse_real(std::string_view text);

}  // namespace pbp

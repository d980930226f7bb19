#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pbp/linear_model.hpp"

namespace pbp {

using FeatureId = std::int32_t;

// Interned feature names.
class FeatureIndex {
 public:
  // -1 when the name has never been interned.
  FeatureId find(const std::string& name) const;
  FeatureId intern(const std::string& name);
  const std::string& name(FeatureId id) const { return names_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, FeatureId> ids_;
  std::vector<std::string> names_;
};

// Dense per-class weights over one shared feature index.
class MulticlassWeights {
 public:
  explicit MulticlassWeights(std::size_t n_classes = 1) : n_classes_(n_classes) {}

  std::size_t n_classes() const { return n_classes_; }
  const FeatureIndex& index() const { return index_; }

  // Unknown names are skipped.
  void lookup(const std::vector<std::string>& names, std::vector<FeatureId>& ids) const;
  void intern(const std::vector<std::string>& names, std::vector<FeatureId>& ids);

  double score(std::span<const FeatureId> ids, std::size_t cls) const {
    double s = 0.0;
    for (FeatureId id : ids) s += w_[static_cast<std::size_t>(id) * n_classes_ + cls];
    return s;
  }
  double get(FeatureId id, std::size_t cls) const { return w_[static_cast<std::size_t>(id) * n_classes_ + cls]; }
  double& at(FeatureId id, std::size_t cls) { return w_[static_cast<std::size_t>(id) * n_classes_ + cls]; }
  std::size_t n_parameters() const { return w_.size(); }

  // Feature names become "<tag>~<name>" when class_tags is nonempty.
  LinearModel to_linear_model(const std::vector<std::string>& class_tags) const;
  static MulticlassWeights from_linear_model(const LinearModel& model,
                                             const std::vector<std::string>& class_tags);

 private:
  void grow() { w_.resize(index_.size() * n_classes_, 0.0); }

  std::size_t n_classes_;
  FeatureIndex index_;
  std::vector<double> w_;
};

// Perceptron with weight averaging over the trajectory of per-instance weight vectors.
class Perceptron {
 public:
  explicit Perceptron(std::size_t n_classes = 1) : current_(n_classes) {}

  const MulticlassWeights& weights() const { return current_; }
  void lookup(const std::vector<std::string>& names, std::vector<FeatureId>& ids) const {
    current_.lookup(names, ids);
  }
  void intern(const std::vector<std::string>& names, std::vector<FeatureId>& ids) {
    current_.intern(names, ids);
    acc_.resize(current_.n_parameters(), 0.0);
  }
  double score(std::span<const FeatureId> ids, std::size_t cls) const { return current_.score(ids, cls); }

  void update(std::span<const FeatureId> ids, std::size_t cls, double delta);
  // Ends the current training instance; its weight vector joins the average.
  void next_instance() { ++instances_; }
  std::size_t instances() const { return instances_; }

  MulticlassWeights averaged() const;

 private:
  MulticlassWeights current_;
  std::vector<double> acc_;  // sum over updates of (instances completed before it) * delta
  std::size_t instances_ = 0;
};

using PerceptronStep = std::function<void(std::size_t instance, Perceptron& perceptron)>;

// Runs `step` on every instance once per epoch, in a per-epoch shuffled order,
// and closes each instance. Throws std::invalid_argument when epochs < 1.
Perceptron train_perceptron(std::size_t n_instances, std::size_t n_classes, int epochs,
                            std::uint64_t seed, const PerceptronStep& step);
// Same, continuing from `initial` (e.g. with features interned up front).
Perceptron train_perceptron(Perceptron initial, std::size_t n_instances, int epochs, std::uint64_t seed,
                            const PerceptronStep& step);

}  // namespace pbp

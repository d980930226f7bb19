#include "pbp/perceptron.hpp"

#include <algorithm>
#include <stdexcept>

#include "pbp/error.hpp"
#include "pbp/treebank.hpp"

namespace pbp {

FeatureId FeatureIndex::find(const std::string& name) const {
  auto it = ids_.find(name);
  return it == ids_.end() ? -1 : it->second;
}

FeatureId FeatureIndex::intern(const std::string& name) {
  auto [it, inserted] = ids_.try_emplace(name, static_cast<FeatureId>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

void MulticlassWeights::lookup(const std::vector<std::string>& names, std::vector<FeatureId>& ids) const {
  ids.clear();
  for (const auto& n : names) {
    const FeatureId id = index_.find(n);
    if (id >= 0) ids.push_back(id);
  }
}

void MulticlassWeights::intern(const std::vector<std::string>& names, std::vector<FeatureId>& ids) {
  ids.clear();
  for (const auto& n : names) ids.push_back(index_.intern(n));
  grow();
}

LinearModel MulticlassWeights::to_linear_model(const std::vector<std::string>& class_tags) const {
  if (!class_tags.empty() && class_tags.size() != n_classes_) {
    throw std::invalid_argument("class tag count does not match class count");
  }
  LinearModel model(ModelKind::PerceptronAveraged);
  for (std::size_t id = 0; id < index_.size(); ++id) {
    for (std::size_t c = 0; c < n_classes_; ++c) {
      const double w = w_[id * n_classes_ + c];
      if (w == 0.0) continue;
      const std::string& base = index_.name(static_cast<FeatureId>(id));
      model.set_weight(class_tags.empty() ? base : class_tags[c] + "~" + base, w);
    }
  }
  return model;
}

MulticlassWeights MulticlassWeights::from_linear_model(const LinearModel& model,
                                                       const std::vector<std::string>& class_tags) {
  MulticlassWeights out(class_tags.empty() ? 1 : class_tags.size());
  // Insert in sorted order so the index layout does not depend on hash-map iteration.
  std::vector<std::pair<std::string, double>> entries(model.weights().begin(), model.weights().end());
  std::sort(entries.begin(), entries.end());
  for (const auto& [name, w] : entries) {
    if (name == kBiasFeature) continue;
    std::size_t cls = 0;
    std::string base = name;
    if (!class_tags.empty()) {
      const std::size_t tilde = name.find('~');
      if (tilde == std::string::npos) throw ModelMismatchError("feature '" + name + "' lacks a class tag");
      const std::string tag = name.substr(0, tilde);
      auto it = std::find(class_tags.begin(), class_tags.end(), tag);
      if (it == class_tags.end()) throw ModelMismatchError("unknown class tag '" + tag + "'");
      cls = static_cast<std::size_t>(it - class_tags.begin());
      base = name.substr(tilde + 1);
    }
    const FeatureId id = out.index_.intern(base);
    out.grow();
    out.at(id, cls) = w;
  }
  return out;
}

void Perceptron::update(std::span<const FeatureId> ids, std::size_t cls, double delta) {
  const double stamp = static_cast<double>(instances_);
  const std::size_t k = current_.n_classes();
  for (FeatureId id : ids) {
    current_.at(id, cls) += delta;
    acc_[static_cast<std::size_t>(id) * k + cls] += stamp * delta;
  }
}

MulticlassWeights Perceptron::averaged() const {
  MulticlassWeights avg = current_;
  if (instances_ == 0) return avg;
  const double t = static_cast<double>(instances_);
  for (std::size_t id = 0; id < avg.index().size(); ++id) {
    for (std::size_t c = 0; c < avg.n_classes(); ++c) {
      double& w = avg.at(static_cast<FeatureId>(id), c);
      w -= acc_[id * avg.n_classes() + c] / t;
    }
  }
  return avg;
}

Perceptron train_perceptron(std::size_t n_instances, std::size_t n_classes, int epochs,
                            std::uint64_t seed, const PerceptronStep& step) {
  return train_perceptron(Perceptron(n_classes), n_instances, epochs, seed, step);
}

Perceptron train_perceptron(Perceptron p, std::size_t n_instances, int epochs, std::uint64_t seed,
                            const PerceptronStep& step) {
  if (epochs < 1) throw std::invalid_argument("perceptron training needs at least one epoch");
  for (int e = 0; e < epochs; ++e) {
    const auto order = shuffled_indices(n_instances, seed + static_cast<std::uint64_t>(e) * 0x9e3779b97f4a7c15ULL);
    for (std::size_t i : order) {
      step(i, p);
      p.next_instance();
    }
  }
  return p;
}

}  // namespace pbp

#pragma once

#include <stdexcept>
#include <string>

namespace pbp {

// Malformed input text (CoNLL-X lines, model files, trace files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Head assignment that violates the tree / partial-tree invariants.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent data: misaligned corpora, train/risk overlap, degenerate labels.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model file that does not fit the code reading it (version, template, kind).
class ModelMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pbp

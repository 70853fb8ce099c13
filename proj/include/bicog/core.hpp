#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bicog/errors.hpp"

namespace bicog {

using ExampleId = std::int64_t;

struct Example {
  ExampleId id = 0;
  std::vector<double> features;
  std::optional<int> label;  // class index in [0, C) when present
};

class OracleView;  // metrics-side window onto hidden ground truth

// Labeled / unlabeled / test splits. Unlabeled examples carry no label
// field; their ground truth is kept in a private map readable only through
// OracleView so learners and the selector cannot see it.
class Dataset {
 public:
  Dataset(std::vector<Example> labeled, std::vector<Example> unlabeled,
          std::unordered_map<ExampleId, int> hidden_truth,
          std::vector<Example> test, int num_classes,
          std::vector<int> base_classes);

  const std::vector<Example>& labeled() const { return labeled_; }
  const std::vector<Example>& unlabeled() const { return unlabeled_; }
  const std::vector<Example>& test() const { return test_; }
  int num_classes() const { return num_classes_; }
  const std::vector<int>& base_classes() const { return base_classes_; }
  bool is_base_class(int c) const;
  int dim() const;

 private:
  friend class OracleView;
  std::vector<Example> labeled_;
  std::vector<Example> unlabeled_;
  std::unordered_map<ExampleId, int> hidden_truth_;
  std::vector<Example> test_;
  int num_classes_;
  std::vector<int> base_classes_;
};

enum class Stage { inter, intra, intersection, final_set };

std::string stage_name(Stage s);

// Map from unlabeled example id to assigned pseudo-label. Ordered so that
// iteration (and therefore every downstream draw) is deterministic.
struct PseudoLabeledSet {
  std::map<ExampleId, int> entries;
  Stage stage = Stage::inter;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

class BaseLearner;

// K learners plus the per-model bookkeeping of the self-training loop.
struct EnsembleState {
  std::vector<std::unique_ptr<BaseLearner>> learners;
  std::vector<double> prev_error;  // e'_j
  std::vector<long> prev_count;    // L'_j
  std::vector<bool> update_flags;
  int round = 0;  // t

  explicit EnsembleState(std::vector<std::unique_ptr<BaseLearner>> models);
  int k() const { return static_cast<int>(learners.size()); }
};

// Builds an open-world split: the first ceil(base_fraction * C) classes
// under a seeded shuffle become base classes, shots_per_class examples of
// each base class form the labeled split, everything else in the pool goes
// to the unlabeled split. The pool's test examples are passed through.
Dataset make_open_world_split(const std::vector<Example>& pool,
                              std::vector<Example> test, int num_classes,
                              double base_fraction, int shots_per_class,
                              std::uint64_t seed);

// Diagnostic invariant scan; returns human-readable violations, never throws.
std::vector<std::string> validate_dataset(const Dataset& d);

}  // namespace bicog

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bicog/augment.hpp"
#include "bicog/datagen.hpp"
#include "bicog/orchestrator.hpp"

namespace bicog {

struct LearnerSpec {
  std::string family = "logistic";  // logistic | centroid | knn | noisy_oracle
  int replicate = 1;
  // logistic
  double l2 = 1e-3;
  int pretrain_epochs = 50;
  double pretrain_lr = 0.5;
  // knn
  int knn_k = 3;
  // noisy oracle
  std::vector<double> oracle_accuracy;
  std::vector<double> oracle_schedule;
  std::vector<double> oracle_confusion_row;
  bool oracle_vary_with_round = true;
};

struct CsvSpec {
  std::string path;
  std::vector<std::string> feature_columns;
  std::string label_column;
  std::string split_column;  // empty: split derived from config
};

struct SplitSpec {
  double base_fraction = 1.0;
  int shots_per_class = 4;
};

struct AugmentSpec {
  // sigmas as multiples of the mean per-feature standard deviation
  double weak_scale = 0.05;
  double strong_scale = 0.5;
  double dropout = 0.2;
};

struct ExperimentConfig {
  std::optional<GeneratorParams> generator;  // exactly one of generator/csv
  std::optional<CsvSpec> csv;
  SplitSpec split;
  std::vector<LearnerSpec> learners;
  AugmentSpec augment;
  RunConfig run;
  std::string output_dir = "out";
  std::vector<std::uint64_t> seeds = {1};

  void validate() const;  // K matches slot count, seeds non-empty, ...

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

// expanded learner slots (replicates flattened); size equals run.k
std::vector<LearnerSpec> expand_learner_slots(const ExperimentConfig& cfg);

}  // namespace bicog

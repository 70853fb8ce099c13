#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bicog/config.hpp"
#include "bicog/core.hpp"
#include "bicog/learners.hpp"
#include "bicog/record.hpp"

namespace bicog {

struct BuiltDataset {
  std::unique_ptr<Dataset> dataset;
  std::vector<Example> pretrain_pool;  // covers all classes
};

BuiltDataset build_dataset(const ExperimentConfig& cfg, std::uint64_t seed);

// One learner per slot, pretrained on a per-slot subsample of the pretrain
// pool. Oracle slots receive the full hidden truth map and are flagged.
std::vector<std::unique_ptr<BaseLearner>> build_learners(
    const ExperimentConfig& cfg, const Dataset& dataset,
    const std::vector<Example>& pretrain_pool, std::uint64_t seed);

struct SeedRunResult {
  std::uint64_t seed = 0;
  double baseline_accuracy = 0.0;  // ensemble after warm-up, before round 1
  std::optional<double> baseline_hm;
  double final_accuracy = 0.0;
  std::optional<double> final_hm;
  std::vector<RoundRecord> history;
  std::string rounds_payload;   // ndjson, one record per round per model
  std::string summary_payload;  // json
};

struct ExperimentResult {
  std::vector<SeedRunResult> seeds;
  std::string aggregate_payload;  // json, mean +- std across seeds
};

// Executes the configured run for every seed; optionally writes
// rounds.ndjson / summary.json per seed plus aggregate.json and plot-data
// files under output_dir. Payload strings never contain timestamps.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool write_files = true);

SeedRunResult run_single_seed(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace bicog

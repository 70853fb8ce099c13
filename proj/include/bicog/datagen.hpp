#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bicog/core.hpp"

namespace bicog {

struct GeneratorParams {
  std::string name = "blobs";  // blobs | rings | biased_blobs
  int num_classes = 4;
  int dim = 2;
  int train_per_class = 100;
  int test_per_class = 50;
  int pretrain_per_class = 3;  // disjoint sample simulating pretraining
  double separation = 3.0;   // centroid spread (blobs) / ring gap (rings)
  double noise = 1.0;        // within-class standard deviation
  double bias_skew = 3.0;    // biased_blobs: class-0 size multiplier
};

// Labeled pool + labeled test set for a synthetic task. Ids are unique
// across the pool and test; the same seed reproduces the same data.
struct GeneratedData {
  std::vector<Example> pool;
  std::vector<Example> test;
  std::vector<Example> pretrain;  // covers every class
  int num_classes = 0;
};

GeneratedData generate_dataset(const GeneratorParams& params,
                               std::uint64_t seed);

// Standard SSL convenience split: shots_per_class labeled per class, the
// rest of the pool unlabeled, all classes base.
Dataset make_ssl_split(const GeneratedData& data, int shots_per_class,
                       std::uint64_t seed);

}  // namespace bicog

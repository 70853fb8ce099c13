#pragma once

#include <cstdint>
#include <vector>

#include "bicog/core.hpp"

namespace bicog {

// Vector analogs of weak/strong input perturbation: weak adds small
// Gaussian noise; strong adds larger noise then zeroes features at random.
struct AugmentConfig {
  double weak_noise_sigma = 0.0;
  double strong_noise_sigma = 0.0;
  double strong_dropout_prob = 0.2;
  std::uint64_t seed = 0;

  void validate() const;

  // sigmas scaled from the mean per-feature standard deviation of the pool
  static AugmentConfig from_dataset(const Dataset& d, std::uint64_t seed,
                                    double weak_scale = 0.05,
                                    double strong_scale = 0.5,
                                    double dropout = 0.2);
};

// Both operators are pure functions of (features, example_id, round, view,
// cfg.seed); all K models see identical views within a round.
std::vector<double> weak_augment(const std::vector<double>& features,
                                 ExampleId id, int round,
                                 const AugmentConfig& cfg);
std::vector<double> strong_augment(const std::vector<double>& features,
                                   ExampleId id, int round,
                                   const AugmentConfig& cfg);

Example weak_view(const Example& x, int round, const AugmentConfig& cfg);
Example strong_view(const Example& x, int round, const AugmentConfig& cfg);

}  // namespace bicog

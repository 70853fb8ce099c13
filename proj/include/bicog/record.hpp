#pragma once

#include <optional>
#include <vector>

namespace bicog {

// Per-model bookkeeping for one self-training round.
struct ModelRoundRecord {
  double measured_error = 0.0;       // e_hat_j this round
  double prev_error = 0.0;           // e'_j entering the round
  bool error_improved = false;       // e_hat < e'
  bool gate_passed = false;          // lower-bound gate (after bootstrap)
  bool bootstrap_applied = false;
  bool updated = false;
  long budget = 0;                   // L_t* (0 when not computed)
  long inter_size = 0;
  long intra_size = 0;
  long candidate_size = 0;           // |D_PL| = |inter ∩ intra|
  long accepted_size = 0;            // |D_PL*|
  long prev_count_after = 0;         // L'_j after the round
  std::vector<long> inter_class_counts;     // pseudo-label class histogram
  std::vector<long> accepted_class_counts;  // of D_PL*
  // oracle-view quality of D_PL*; empty sets stay undefined
  std::optional<double> pseudo_accuracy;
  // mean single-peer accuracy on the same accepted samples
  std::optional<double> peer_accuracy_mean;
  double test_accuracy = 0.0;        // model's own post-round test accuracy
};

struct RoundRecord {
  int round = 0;  // t
  std::vector<ModelRoundRecord> models;
  int updates = 0;
  // ensemble majority metrics on the test split after the round
  double ensemble_overall_accuracy = 0.0;
  std::optional<double> ensemble_harmonic_mean;  // absent without novel classes
};

}  // namespace bicog

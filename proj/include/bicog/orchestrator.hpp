#pragma once

#include <cstdint>
#include <vector>

#include "bicog/augment.hpp"
#include "bicog/core.hpp"
#include "bicog/record.hpp"
#include "bicog/selector.hpp"

namespace bicog {

enum class RoundMode { sequential, snapshot };

struct RunConfig {
  int k = 3;
  double alpha = 1.0;
  int warmup_epochs = 10;      // zeta
  int selftrain_epochs = 5;    // kappa
  double learning_rate = 0.5;  // fine-tune step size for gradient learners
  int max_rounds = 50;
  RoundMode round_mode = RoundMode::sequential;
  VoteMode vote_mode = VoteMode::paper;
  BudgetMode budget_mode = BudgetMode::theorem;
  bool stratified_subsample = false;
  bool count_no_consensus_as_error = false;
  std::uint64_t seed = 0;

  void validate() const;
};

// Fine-tunes every learner on the labeled split for warmup_epochs and
// resets the bookkeeping (e' = 0.5, L' = 0, t = 0).
void warmup(EnsembleState& state, const Dataset& dataset, const RunConfig& cfg);

// One pass of the outer loop: per model, measure peer error, run the
// three-stage selection, gate on the budget bounds, fine-tune if accepted.
RoundRecord run_round(EnsembleState& state, const Dataset& dataset,
                      const RunConfig& cfg, const AugmentConfig& augment);

// Repeats run_round until a round with zero updates or max_rounds.
std::vector<RoundRecord> run(EnsembleState& state, const Dataset& dataset,
                             const RunConfig& cfg,
                             const AugmentConfig& augment);

// Invariant scan over a run history: strictly decreasing accepted e',
// strictly increasing L', |D_PL*| within budget and candidate size.
// Returns human-readable violations (empty when clean).
std::vector<std::string> check_history_invariants(
    const std::vector<RoundRecord>& history);

}  // namespace bicog

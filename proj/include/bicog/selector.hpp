#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bicog/augment.hpp"
#include "bicog/core.hpp"
#include "bicog/learners.hpp"

namespace bicog {

// Majority-vote acceptance rule. paper: unique argmax with count >=
// ceil((K-1)/2). strict: unique argmax with count > (K-1)/2.
enum class VoteMode { paper, strict };

// theorem: L* = ceil(ratio^{alpha t} * L_prev - 1). algorithm1:
// floor(ratio^{alpha t} * L_prev).
enum class BudgetMode { theorem, algorithm1 };

struct VoteTally {
  ExampleId example_id = 0;
  std::vector<int> counts;                         // per class, sums to K-1
  std::optional<std::pair<int, int>> winner;       // (label, count), unique argmax
};

VoteTally tally_votes(ExampleId id, const std::vector<int>& peer_labels,
                      int num_classes);

// Applies the vote threshold to a tally; nullopt means discarded.
std::optional<int> vote_winner(const VoteTally& tally, int num_peers,
                               VoteMode mode);

struct ErrorEstimate {
  double error_rate = 0.0;
  long consensus_count = 0;
  bool floor_applied = false;
};

// Inter-model consistency: peer_predictions holds K-1 label lists aligned
// with `unlabeled`.
PseudoLabeledSet inter_consistency(
    const std::vector<Example>& unlabeled,
    const std::vector<std::vector<int>>& peer_predictions, int ensemble_k,
    VoteMode mode, int num_classes);

// Intra-model consistency: retained iff every peer is stable on the weak
// view, flipped on the strong view, and all peers agree on the original
// label.
PseudoLabeledSet intra_consistency(const std::vector<Example>& unlabeled,
                                   const std::vector<const BaseLearner*>& peers,
                                   const AugmentConfig& augment, int round);

PseudoLabeledSet intersect(const PseudoLabeledSet& a,
                           const PseudoLabeledSet& b);

// Peer-majority error on the labeled set, floored at 1/(2|D_L|). When
// count_no_consensus_as_error is set, no-consensus samples count as wrong
// and the denominator is all of D_L.
ErrorEstimate measure_error(const std::vector<Example>& labeled,
                            const std::vector<const BaseLearner*>& peers,
                            VoteMode mode, int num_classes, int round,
                            bool count_no_consensus_as_error = false);

// Pseudo-label budget at iteration t from the previous round's error and
// count.
long budget(double e_prev, double e_cur, int t, double alpha, long l_prev,
            BudgetMode mode = BudgetMode::theorem);

// Lower-bound gate: e_cur < e_prev and
// L_prev > e_cur^{alpha t} / (e_prev^{alpha t} - e_cur^{alpha t}).
bool lower_bound_ok(double e_prev, double e_cur, int t, double alpha,
                    long l_prev);

// Bootstrap value for L' on a model's first gated round:
// floor(e_cur^{at}/(e_prev^{at} - e_cur^{at})) + 1.
long bootstrap_count(double e_prev, double e_cur, int t, double alpha);

PseudoLabeledSet subsample(const PseudoLabeledSet& set, long n,
                           std::uint64_t seed, bool stratified,
                           int num_classes = 0);

}  // namespace bicog

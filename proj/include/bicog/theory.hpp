#pragma once

#include <cstdint>
#include <vector>

namespace bicog::theory {

struct PacParams {
  double epsilon = 0.1;
  double eta = 0.0;
  long hypothesis_count = 1;
  double delta = 0.05;
};

// m = ceil( 2 / (eps^2 (1-2 eta)^2) * ln(2|F|/delta) )
long pac_sample_bound(double epsilon, double eta, long hypothesis_count,
                      double delta);

// eps = sqrt(c) / sqrt(m (1-2 eta)^2), with c = 2 mu ln(2|F|/delta)
double epsilon_from(long m, double eta, double c);

// eta_t = e * L_t / (L + L_t)
double noise_ratio(double vote_error, long pseudo_count, long labeled_count);

// 0 < e_t/e_prev < L_prev/L_t < 1
bool lemma1_holds(double e_t, double e_prev, long l_t, long l_prev);

struct SufficientCondition {
  bool holds = false;
  // the two sides of the sample-complexity comparison:
  // (L + L_t)(1 - 2 eta_t)^2 vs (L + L_prev)(1 - 2 eta_prev)^2
  double witness_current = 0.0;
  double witness_previous = 0.0;
};

// (L_t > L_prev) AND (e_t * L_t < e_prev * L_prev), with witnesses
SufficientCondition sufficient_condition_holds(double e_t, double e_prev,
                                               long l_t, long l_prev,
                                               long labeled_count);

struct VoteErrorResult {
  double conditional_error = 0.0;  // P(majority wrong | accepted)
  double acceptance_rate = 0.0;    // P(accepted)
  long accepted = 0;
  long wrong = 0;
  long trials = 0;
};

// Monte Carlo estimate of the peer-majority error under the uniform-wrong
// noise model, applying the same unique-argmax vote rule as the selector.
VoteErrorResult mc_vote_error(const std::vector<double>& peer_accuracies,
                              int num_classes, long trials,
                              std::uint64_t seed);

}  // namespace bicog::theory

#include "bicog/theory.hpp"

#include <cmath>

#include "bicog/errors.hpp"
#include "bicog/rng.hpp"
#include "bicog/selector.hpp"

namespace bicog::theory {

long pac_sample_bound(double epsilon, double eta, long hypothesis_count,
                      double delta) {
  if (epsilon <= 0.0) throw InvalidParams("pac: epsilon must be > 0");
  if (eta < 0.0 || eta >= 0.5) throw NoiseTooHigh("pac: eta must be in [0, 0.5)");
  if (hypothesis_count < 1) throw InvalidParams("pac: |F| must be >= 1");
  if (delta <= 0.0 || delta >= 1.0)
    throw InvalidParams("pac: delta must be in (0, 1)");
  const long double m =
      2.0L / (static_cast<long double>(epsilon) * epsilon *
              (1.0L - 2.0L * eta) * (1.0L - 2.0L * eta)) *
      logl(2.0L * static_cast<long double>(hypothesis_count) / delta);
  return static_cast<long>(ceill(m));
}

double epsilon_from(long m, double eta, double c) {
  if (m < 1) throw InvalidParams("epsilon_from: m must be >= 1");
  if (eta < 0.0 || eta >= 0.5)
    throw NoiseTooHigh("epsilon_from: eta must be in [0, 0.5)");
  if (c <= 0.0) throw InvalidParams("epsilon_from: c must be > 0");
  const double one_minus = 1.0 - 2.0 * eta;
  return std::sqrt(c) / std::sqrt(static_cast<double>(m) * one_minus * one_minus);
}

double noise_ratio(double vote_error, long pseudo_count, long labeled_count) {
  if (labeled_count + pseudo_count < 1)
    throw InvalidParams("noise_ratio: L + L_t must be >= 1");
  if (vote_error < 0.0 || vote_error > 1.0)
    throw InvalidParams("noise_ratio: e must be in [0, 1]");
  return vote_error * static_cast<double>(pseudo_count) /
         static_cast<double>(labeled_count + pseudo_count);
}

bool lemma1_holds(double e_t, double e_prev, long l_t, long l_prev) {
  if (e_prev <= 0.0 || l_t <= 0) return false;
  // 0 < e_t/e_prev < l_prev/l_t < 1, cross-multiplied so the comparison
  // uses the same arithmetic as the sufficient-condition form
  return e_t > 0.0 && e_t * static_cast<double>(l_t) <
                          e_prev * static_cast<double>(l_prev) &&
         l_t > l_prev;
}

SufficientCondition sufficient_condition_holds(double e_t, double e_prev,
                                               long l_t, long l_prev,
                                               long labeled_count) {
  SufficientCondition out;
  out.holds = l_t > l_prev &&
              e_t * static_cast<double>(l_t) <
                  e_prev * static_cast<double>(l_prev);
  auto witness = [labeled_count](double e, long lt) {
    const double total = static_cast<double>(labeled_count + lt);
    const double eta = e * static_cast<double>(lt) / total;
    const double term = 1.0 - 2.0 * eta;
    return total * term * term;
  };
  out.witness_current = witness(e_t, l_t);
  out.witness_previous = witness(e_prev, l_prev);
  return out;
}

VoteErrorResult mc_vote_error(const std::vector<double>& peer_accuracies,
                              int num_classes, long trials,
                              std::uint64_t seed) {
  if (trials < 1) throw InvalidParams("mc_vote_error: trials must be >= 1");
  if (num_classes < 2) throw InvalidParams("mc_vote_error: C must be >= 2");
  for (double p : peer_accuracies)
    if (p < 0.0 || p > 1.0)
      throw InvalidParams("mc_vote_error: accuracy outside [0,1]");

  const int num_peers = static_cast<int>(peer_accuracies.size());
  VoteErrorResult res;
  res.trials = trials;
  std::vector<int> votes(num_peers);
  Rng rng = make_stream(seed, {0xc0deu});
  for (long trial = 0; trial < trials; ++trial) {
    const int truth = static_cast<int>(rng.next_below(num_classes));
    for (int p = 0; p < num_peers; ++p) {
      if (rng.next_double() < peer_accuracies[p]) {
        votes[p] = truth;
      } else {
        const int wrong = static_cast<int>(rng.next_below(num_classes - 1));
        votes[p] = wrong >= truth ? wrong + 1 : wrong;
      }
    }
    const VoteTally tally = tally_votes(trial, votes, num_classes);
    const auto y = vote_winner(tally, num_peers, VoteMode::paper);
    if (!y) continue;
    ++res.accepted;
    if (*y != truth) ++res.wrong;
  }
  res.acceptance_rate =
      static_cast<double>(res.accepted) / static_cast<double>(trials);
  res.conditional_error =
      res.accepted == 0
          ? 0.0
          : static_cast<double>(res.wrong) / static_cast<double>(res.accepted);
  return res;
}

}  // namespace bicog::theory

// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "bicog/experiment.hpp"
#include "bicog/metrics.hpp"
#include "bicog/orchestrator.hpp"
#include "bicog/selector.hpp"
#include "bicog/theory.hpp"

using namespace bicog;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& why) {
  std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
              title, why.empty() ? "" : " — ", why.c_str());
  if (!ok) ++failures;
}

// ------------------------------------------------------------ criterion 1

std::optional<int> brute_vote(const std::vector<int>& labels, int num_classes,
                              VoteMode mode) {
  std::vector<int> counts(num_classes, 0);
  for (int y : labels) ++counts[y];
  int best = 0, best_n = counts[0], ties = 1;
  for (int c = 1; c < num_classes; ++c) {
    if (counts[c] > best_n) {
      best = c;
      best_n = counts[c];
      ties = 1;
    } else if (counts[c] == best_n) {
      ++ties;
    }
  }
  if (ties != 1) return std::nullopt;
  const int peers = static_cast<int>(labels.size());
  const bool ok = mode == VoteMode::paper ? best_n >= (peers + 1) / 2
                                          : 2 * best_n > peers;
  if (!ok) return std::nullopt;
  return best;
}

void criterion_vote_oracle() {
  const auto start = Clock::now();
  long mismatches = 0, patterns = 0;
  for (int k : {3, 5}) {
    const int peers = k - 1;
    for (int C = 2; C <= 4; ++C) {
      long total = 1;
      for (int p = 0; p < peers; ++p) total *= C;
      for (long code = 0; code < total; ++code) {
        std::vector<int> labels(peers);
        long rem = code;
        for (int p = 0; p < peers; ++p) {
          labels[p] = static_cast<int>(rem % C);
          rem /= C;
        }
        std::vector<Example> unlabeled = {{0, {0.0}, {}}};
        std::vector<std::vector<int>> preds(peers);
        for (int p = 0; p < peers; ++p) preds[p] = {labels[p]};
        for (VoteMode mode : {VoteMode::paper, VoteMode::strict}) {
          ++patterns;
          const auto expected = brute_vote(labels, C, mode);
          const auto got = inter_consistency(unlabeled, preds, k, mode, C);
          const bool match =
              expected ? (got.size() == 1 && got.entries.at(0) == *expected)
                       : got.empty();
          if (!match) ++mismatches;
        }
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream why;
  why << patterns << " patterns, " << mismatches << " mismatches, "
      << secs << " s";
  report(1, "vote-rule oracle equivalence (K in {3,5}, C <= 4, both modes)",
         mismatches == 0 && secs < 10.0, why.str());
}

// ------------------------------------------------------------ criterion 2

void criterion_budget_oracle() {
  const auto start = Clock::now();
  long mismatches = 0, tuples = 0;
  const double alphas[] = {0.7, 1.3};
  const int ts[] = {1, 2, 3};
  const long counts[] = {1, 7, 23, 100, 371};
  for (int p = 2; p <= 40; ++p) {
    for (int q = 1; q < p; ++q) {
      const double e_prev = p / 40.0, e_cur = q / 40.0;
      for (double alpha : alphas) {
        for (int t : ts) {
          // independent high-precision route: exp/log instead of pow
          const long double at = static_cast<long double>(alpha) * t;
          const long double log_ratio =
              logl(static_cast<long double>(e_prev)) -
              logl(static_cast<long double>(e_cur));
          for (long l_prev : counts) {
            ++tuples;
            const long double scaled =
                expl(at * log_ratio) * static_cast<long double>(l_prev);
            const long want_theorem =
                static_cast<long>(ceill(scaled - 1.0L));
            const long want_alg1 = static_cast<long>(floorl(scaled));
            const long double lb =
                expl(at * logl(static_cast<long double>(e_cur))) /
                (expl(at * logl(static_cast<long double>(e_prev))) -
                 expl(at * logl(static_cast<long double>(e_cur))));
            const bool want_gate = static_cast<long double>(l_prev) > lb;
            if (budget(e_prev, e_cur, t, alpha, l_prev) != want_theorem)
              ++mismatches;
            if (budget(e_prev, e_cur, t, alpha, l_prev,
                       BudgetMode::algorithm1) != want_alg1)
              ++mismatches;
            if (lower_bound_ok(e_prev, e_cur, t, alpha, l_prev) != want_gate)
              ++mismatches;
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream why;
  why << tuples << " tuples, " << mismatches << " mismatches, " << secs
      << " s";
  report(2, "budget and lower-bound oracle over a 10^4+ grid",
         tuples >= 10000 && mismatches == 0 && secs < 10.0, why.str());
}

// ------------------------------------------------------------ criterion 3

void criterion_lemma_coherence() {
  long mismatches = 0, witness_failures = 0, tuples = 0;
  for (int et = 1; et <= 10; ++et) {
    for (int ep = 1; ep <= 10; ++ep) {
      for (long lt : {10L, 25L, 60L, 100L, 140L, 200L, 350L, 500L, 800L,
                      1200L}) {
        for (long lp : {5L, 20L, 50L, 90L, 130L, 180L, 300L, 450L, 700L,
                        1000L}) {
          ++tuples;
          const double e_t = et / 20.0, e_prev = ep / 20.0;
          const bool lemma = theory::lemma1_holds(e_t, e_prev, lt, lp);
          const auto suff =
              theory::sufficient_condition_holds(e_t, e_prev, lt, lp, 40);
          if (lemma != suff.holds) ++mismatches;
          if (suff.holds &&
              suff.witness_current <
                  suff.witness_previous * (1.0 - 1e-12))
            ++witness_failures;
        }
      }
    }
  }
  std::ostringstream why;
  why << tuples << " tuples, " << mismatches << " equivalence mismatches, "
      << witness_failures << " witness failures";
  report(3, "improvement condition coherence with witness inequality",
         tuples == 10000 && mismatches == 0 && witness_failures == 0,
         why.str());
}

// ------------------------------------------------------------ criterion 4

void criterion_pac() {
  const long m = theory::pac_sample_bound(0.1, 0.1, 100, 0.05);
  bool monotone_ok = true;
  struct Point {
    long m;
    double eta;
  };
  std::vector<Point> grid;
  for (long mm : {50L, 100L, 200L, 400L, 800L, 1600L, 3200L, 6400L, 12800L,
                  25600L})
    for (double eta : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45})
      grid.push_back({mm, eta});
  for (const Point& a : grid) {
    for (const Point& b : grid) {
      const double ka = double(a.m) * (1 - 2 * a.eta) * (1 - 2 * a.eta);
      const double kb = double(b.m) * (1 - 2 * b.eta) * (1 - 2 * b.eta);
      const double ea = theory::epsilon_from(a.m, a.eta, 2.0);
      const double eb = theory::epsilon_from(b.m, b.eta, 2.0);
      if ((ea < eb) != (ka > kb)) monotone_ok = false;
    }
  }
  std::ostringstream why;
  why << "bound = " << m << ", monotone link "
      << (monotone_ok ? "holds" : "violated") << " on " << grid.size()
      << " grid points";
  report(4, "PAC calculators (reference bound 2592 + monotone link)",
         m == 2592 && monotone_ok, why.str());
}

// ------------------------------------------------------------ criterion 5

void criterion_mc_vote() {
  const auto start = Clock::now();
  const long trials = 1000000;
  const auto r = theory::mc_vote_error({0.9, 0.9}, 2, trials, 424242);
  const double secs = seconds_since(start);
  const double acc_sigma = std::sqrt(0.82 * 0.18 / trials);
  const double cond = 0.01 / 0.82;
  const double cond_sigma = std::sqrt(cond * (1 - cond) / (0.82 * trials));
  const bool acc_ok = std::abs(r.acceptance_rate - 0.82) <= 3 * acc_sigma;
  const bool cond_ok = std::abs(r.conditional_error - cond) <= 3 * cond_sigma;
  std::ostringstream why;
  why << "acceptance " << r.acceptance_rate << " (target 0.82), conditional "
      << r.conditional_error << " (target " << cond << "), " << secs << " s";
  report(5, "Monte Carlo vote error within 3 binomial sigma at 10^6 trials",
         acc_ok && cond_ok && secs < 30.0, why.str());
}

// --------------------------------------------- criteria 6, 7, 9, 10 (runs)

ExperimentConfig blob_experiment() {
  ExperimentConfig cfg;
  GeneratorParams g;
  g.num_classes = 10;
  g.dim = 16;
  g.train_per_class = 54;  // 540 pool - 40 labeled = 500 unlabeled
  g.test_per_class = 50;
  g.separation = 3.0;
  g.noise = 1.0;
  cfg.generator = g;
  cfg.split.shots_per_class = 4;
  const double l2s[3] = {1e-4, 3e-3, 3e-2};
  for (double l2 : l2s) {
    LearnerSpec s;
    s.family = "logistic";
    s.l2 = l2;
    cfg.learners.push_back(s);
  }
  cfg.run.k = 3;
  cfg.run.alpha = 2.0;
  cfg.run.warmup_epochs = 30;
  cfg.run.selftrain_epochs = 30;
  cfg.run.learning_rate = 0.3;
  cfg.run.max_rounds = 20;
  cfg.augment.weak_scale = 0.1;
  cfg.augment.strong_scale = 1.5;
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  return cfg;
}

struct BlobOutcome {
  double mean_gain = 0.0;
  double worst_gain = 0.0;
  bool pseudo_trend_ok = true;
  bool invariants_ok = true;
  double secs = 0.0;
  std::vector<std::string> payloads;  // per-seed rounds + summary
};

BlobOutcome run_blob_experiment() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = blob_experiment();
  BlobOutcome out;
  out.worst_gain = 1e9;
  double gain_sum = 0.0;
  for (std::uint64_t seed : cfg.seeds) {
    const SeedRunResult r = run_single_seed(cfg, seed);
    const double gain = (r.final_accuracy - r.baseline_accuracy) * 100.0;
    gain_sum += gain;
    out.worst_gain = std::min(out.worst_gain, gain);
    double pseudo_sum = 0.0, peer_sum = 0.0;
    int update_events = 0;
    for (const RoundRecord& rr : r.history) {
      for (const ModelRoundRecord& m : rr.models) {
        if (!m.updated || !m.pseudo_accuracy || !m.peer_accuracy_mean)
          continue;
        pseudo_sum += *m.pseudo_accuracy;
        peer_sum += *m.peer_accuracy_mean;
        ++update_events;
      }
    }
    if (update_events == 0 ||
        pseudo_sum / update_events < peer_sum / update_events - 1e-12)
      out.pseudo_trend_ok = false;
    if (!check_history_invariants(r.history).empty())
      out.invariants_ok = false;
    out.payloads.push_back(r.rounds_payload);
    out.payloads.push_back(r.summary_payload);
  }
  out.mean_gain = gain_sum / double(cfg.seeds.size());
  out.secs = seconds_since(start);
  return out;
}

// ------------------------------------------------------------ criterion 8

struct BiasOutcome {
  double raw_share_min = 1.0;
  double mean_inter_share = 0.0;
  double mean_final_share = 0.0;
  std::string payload;
};

BiasOutcome run_bias_experiment() {
  const int C = 10;
  const int unlabeled_n = 3000;
  BiasOutcome out;
  std::ostringstream payload;
  double inter_sum = 0.0, final_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<Example> unlabeled;
    std::unordered_map<ExampleId, int> truth;
    for (int i = 0; i < unlabeled_n; ++i) {
      const ExampleId id = i;
      unlabeled.push_back({id, {double(i), double(i % 7)}, {}});
      truth[id] = i % C;
    }

    // the target model's two peers both over-predict class 0, so their
    // agreement set inherits the bias; the intra filter prefers stable
    // (truthful) predictions over the noisy class-0 collapses
    NoisyOracleLearner::Config biased;
    biased.per_class_accuracy.assign(C, 0.55);
    biased.confusion_row.assign(C, 0.02);
    biased.confusion_row[0] = 1.0;  // wrong predictions collapse to class 0
    biased.seed = 1000 + seed;
    NoisyOracleLearner::Config biased2 = biased;
    biased2.seed = 2000 + seed;

    NoisyOracleLearner peer_a(biased, truth);
    NoisyOracleLearner peer_b(biased2, truth);
    std::vector<Example> probe = {{0, {0.0, 0.0}, {}}};
    peer_a.pretrain(probe, C);
    peer_b.pretrain(probe, C);

    // raw bias check on the biased peer's own predictions
    PseudoLabeledSet raw;
    for (const Example& x : unlabeled)
      raw.entries[x.id] = peer_a.predict(x, 0);
    const double raw_share = distribution_stats(raw, C).max_share;
    out.raw_share_min = std::min(out.raw_share_min, raw_share);

    std::vector<std::vector<int>> preds(2);
    preds[0] = peer_a.predict_batch(unlabeled, 0);
    preds[1] = peer_b.predict_batch(unlabeled, 0);
    const PseudoLabeledSet inter =
        inter_consistency(unlabeled, preds, 3, VoteMode::paper, C);

    AugmentConfig aug;
    aug.weak_noise_sigma = 0.05;
    aug.strong_noise_sigma = 0.5;
    aug.strong_dropout_prob = 0.2;
    aug.seed = seed;
    const PseudoLabeledSet intra =
        intra_consistency(unlabeled, {&peer_a, &peer_b}, aug, 0);
    const PseudoLabeledSet final_set = intersect(inter, intra);

    const double inter_share = distribution_stats(inter, C).max_share;
    const double final_share = distribution_stats(final_set, C).max_share;
    inter_sum += inter_share;
    final_sum += final_share;
    char line[256];
    std::snprintf(line, sizeof line,
                  "{\"seed\":%llu,\"raw\":%.17g,\"inter\":%.17g,"
                  "\"final\":%.17g}\n",
                  static_cast<unsigned long long>(seed), raw_share,
                  inter_share, final_share);
    payload << line;
  }
  out.mean_inter_share = inter_sum / 20.0;
  out.mean_final_share = final_sum / 20.0;
  out.payload = payload.str();
  return out;
}

}  // namespace

int main() {
  criterion_vote_oracle();
  criterion_budget_oracle();
  criterion_lemma_coherence();
  criterion_pac();
  criterion_mc_vote();

  const BlobOutcome blob1 = run_blob_experiment();
  {
    std::ostringstream why;
    why << "mean gain " << blob1.mean_gain << " pt, worst seed "
        << blob1.worst_gain << " pt, " << blob1.secs << " s";
    report(6, "desk-scale gain over the labeled-only baseline (10 seeds)",
           blob1.mean_gain >= 2.0 && blob1.worst_gain >= -1.0 &&
               blob1.secs < 300.0,
           why.str());
  }
  report(7, "pseudo-label accuracy >= mean peer accuracy per seed",
         blob1.pseudo_trend_ok, "");

  const BiasOutcome bias1 = run_bias_experiment();
  {
    const double margin = bias1.mean_inter_share - bias1.mean_final_share;
    std::ostringstream why;
    why << "raw share >= " << bias1.raw_share_min << ", inter "
        << bias1.mean_inter_share << ", final " << bias1.mean_final_share
        << ", margin " << margin;
    report(8, "bias reduction through the consistency intersection (20 seeds)",
           bias1.raw_share_min >= 0.3 && margin >= 0.01, why.str());
  }

  report(9, "orchestrator monotonicity invariants across acceptance runs",
         blob1.invariants_ok, "");

  const BlobOutcome blob2 = run_blob_experiment();
  const BiasOutcome bias2 = run_bias_experiment();
  const bool replay_ok =
      blob1.payloads == blob2.payloads && bias1.payload == bias2.payload;
  report(10, "byte-identical replays of runs 6 and 8", replay_ok, "");

  return failures == 0 ? 0 : 1;
}

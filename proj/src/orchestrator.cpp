#include "bicog/orchestrator.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "bicog/metrics.hpp"
#include "bicog/rng.hpp"

namespace bicog {

void RunConfig::validate() const {
  if (k < 3) throw InvalidParams("run config: K must be >= 3");
  if (alpha <= 0.0) throw InvalidParams("run config: alpha must be > 0");
  if (warmup_epochs < 0 || selftrain_epochs < 0)
    throw InvalidParams("run config: negative epoch count");
  if (max_rounds < 0) throw InvalidParams("run config: negative max_rounds");
  if (learning_rate <= 0.0)
    throw InvalidParams("run config: learning_rate must be > 0");
}

void warmup(EnsembleState& state, const Dataset& dataset,
            const RunConfig& cfg) {
  cfg.validate();
  if (state.k() != cfg.k)
    throw InvalidParams("warmup: ensemble size differs from config K");
  if (cfg.warmup_epochs > 0) {
    for (auto& learner : state.learners)
      learner->fine_tune(dataset.labeled(), cfg.warmup_epochs,
                         cfg.learning_rate);
  }
  state.round = 0;
  std::fill(state.prev_error.begin(), state.prev_error.end(), 0.5);
  std::fill(state.prev_count.begin(), state.prev_count.end(), 0L);
  std::fill(state.update_flags.begin(), state.update_flags.end(), false);
}

namespace {

std::vector<const BaseLearner*> peers_excluding(
    const std::vector<const BaseLearner*>& all, int j) {
  std::vector<const BaseLearner*> out;
  out.reserve(all.size() - 1);
  for (int k = 0; k < static_cast<int>(all.size()); ++k)
    if (k != j) out.push_back(all[k]);
  return out;
}

}  // namespace

RoundRecord run_round(EnsembleState& state, const Dataset& dataset,
                      const RunConfig& cfg, const AugmentConfig& augment) {
  cfg.validate();
  const int k = state.k();
  const int num_classes = dataset.num_classes();
  state.round += 1;
  const int t = state.round;

  RoundRecord rec;
  rec.round = t;
  rec.models.resize(k);

  // In snapshot mode all selection within the round sees round-start
  // parameters; in sequential mode later models see already-updated peers.
  std::vector<std::unique_ptr<BaseLearner>> frozen;
  std::vector<const BaseLearner*> views(k);
  if (cfg.round_mode == RoundMode::snapshot) {
    frozen.reserve(k);
    for (const auto& m : state.learners) frozen.push_back(m->clone());
    for (int j = 0; j < k; ++j) views[j] = frozen[j].get();
  } else {
    for (int j = 0; j < k; ++j) views[j] = state.learners[j].get();
  }

  std::unordered_map<ExampleId, const Example*> unlabeled_by_id;
  for (const Example& e : dataset.unlabeled()) unlabeled_by_id[e.id] = &e;

  const OracleView oracle(dataset);

  for (int j = 0; j < k; ++j) {
    ModelRoundRecord& m = rec.models[j];
    state.update_flags[j] = false;
    m.prev_error = state.prev_error[j];
    m.prev_count_after = state.prev_count[j];

    const std::vector<const BaseLearner*> peers = peers_excluding(views, j);

    ErrorEstimate est;
    try {
      est = measure_error(dataset.labeled(), peers, cfg.vote_mode, num_classes,
                          t, cfg.count_no_consensus_as_error);
    } catch (const NoConsensus&) {
      continue;  // model sits out this round
    }
    m.measured_error = est.error_rate;
    m.error_improved = est.error_rate < state.prev_error[j];
    if (!m.error_improved) continue;

    std::vector<std::vector<int>> peer_preds;
    peer_preds.reserve(peers.size());
    for (const BaseLearner* p : peers)
      peer_preds.push_back(p->predict_batch(dataset.unlabeled(), t));
    const PseudoLabeledSet inter = inter_consistency(
        dataset.unlabeled(), peer_preds, k, cfg.vote_mode, num_classes);
    const PseudoLabeledSet intra =
        intra_consistency(dataset.unlabeled(), peers, augment, t);
    const PseudoLabeledSet candidates = intersect(inter, intra);
    m.inter_size = static_cast<long>(inter.size());
    m.intra_size = static_cast<long>(intra.size());
    m.candidate_size = static_cast<long>(candidates.size());
    m.inter_class_counts = distribution_stats(inter, num_classes).class_counts;

    // first gated round: L' = 0 can never satisfy the lower bound, so seed
    // it just above the bound (tri-training style initialization)
    if (state.prev_count[j] == 0) {
      state.prev_count[j] = bootstrap_count(state.prev_error[j],
                                            est.error_rate, t, cfg.alpha);
      m.bootstrap_applied = true;
      m.prev_count_after = state.prev_count[j];
    }

    m.gate_passed = lower_bound_ok(state.prev_error[j], est.error_rate, t,
                                   cfg.alpha, state.prev_count[j]);
    if (!m.gate_passed) continue;

    m.budget = budget(state.prev_error[j], est.error_rate, t, cfg.alpha,
                      state.prev_count[j], cfg.budget_mode);
    const long n = std::min<long>(m.budget,
                                  static_cast<long>(candidates.size()));
    if (n <= state.prev_count[j]) continue;

    const std::uint64_t sub_seed = Rng::mix(
        Rng::mix(cfg.seed, static_cast<std::uint64_t>(j)),
        static_cast<std::uint64_t>(t));
    const PseudoLabeledSet accepted = subsample(
        candidates, n, sub_seed, cfg.stratified_subsample, num_classes);
    m.accepted_size = static_cast<long>(accepted.size());

    std::vector<Example> train = dataset.labeled();
    for (const auto& [id, label] : accepted.entries) {
      Example e = *unlabeled_by_id.at(id);
      e.label = label;
      train.push_back(std::move(e));
    }
    state.learners[j]->fine_tune(train, cfg.selftrain_epochs,
                                 cfg.learning_rate);
    state.prev_error[j] = est.error_rate;
    state.prev_count[j] = m.accepted_size;
    state.update_flags[j] = true;
    m.updated = true;
    m.prev_count_after = state.prev_count[j];
    ++rec.updates;

    m.accepted_class_counts =
        distribution_stats(accepted, num_classes).class_counts;
    m.pseudo_accuracy = pseudo_label_accuracy(accepted, oracle);
    if (!accepted.empty()) {
      double total = 0.0;
      for (const BaseLearner* p : peers) {
        long correct = 0;
        for (const auto& [id, label] : accepted.entries)
          if (p->predict(*unlabeled_by_id.at(id), t) == oracle.truth(id))
            ++correct;
        total += static_cast<double>(correct) /
                 static_cast<double>(accepted.size());
      }
      m.peer_accuracy_mean = total / static_cast<double>(peers.size());
    }
  }

  std::vector<const BaseLearner*> live;
  live.reserve(k);
  for (const auto& l : state.learners) live.push_back(l.get());
  for (int j = 0; j < k; ++j)
    rec.models[j].test_accuracy =
        evaluate_learner(*state.learners[j], dataset, t).overall_accuracy;
  const EvalReport ens = evaluate_ensemble(live, dataset, t);
  rec.ensemble_overall_accuracy = ens.overall_accuracy;
  rec.ensemble_harmonic_mean = ens.harmonic_mean;
  return rec;
}

std::vector<RoundRecord> run(EnsembleState& state, const Dataset& dataset,
                             const RunConfig& cfg,
                             const AugmentConfig& augment) {
  cfg.validate();
  std::vector<RoundRecord> history;
  for (int r = 0; r < cfg.max_rounds; ++r) {
    RoundRecord rr = run_round(state, dataset, cfg, augment);
    const bool done = rr.updates == 0;
    history.push_back(std::move(rr));
    if (done) break;
  }
  return history;
}

std::vector<std::string> check_history_invariants(
    const std::vector<RoundRecord>& history) {
  std::vector<std::string> out;
  if (history.empty()) return out;
  const int k = static_cast<int>(history.front().models.size());
  for (int j = 0; j < k; ++j) {
    double last_error = 0.5;
    long last_count = 0;
    for (const RoundRecord& rr : history) {
      const ModelRoundRecord& m = rr.models[j];
      if (!m.updated) continue;
      std::ostringstream where;
      where << "model " << j << " round " << rr.round << ": ";
      if (!(m.measured_error < last_error))
        out.push_back(where.str() + "accepted error did not strictly decrease");
      if (!(m.accepted_size > last_count) && !(last_count == 0))
        out.push_back(where.str() + "accepted count did not strictly increase");
      if (m.accepted_size > m.budget)
        out.push_back(where.str() + "accepted size exceeds budget");
      if (m.accepted_size > m.candidate_size)
        out.push_back(where.str() + "accepted size exceeds candidate size");
      last_error = m.measured_error;
      last_count = m.accepted_size;
    }
  }
  return out;
}

}  // namespace bicog

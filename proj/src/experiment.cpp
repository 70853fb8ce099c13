#include "bicog/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bicog/csvio.hpp"
#include "bicog/metrics.hpp"
#include "bicog/rng.hpp"

namespace bicog {

namespace {

// all floats serialized at 17 significant digits for byte-stable replays
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : "null";
}

std::string fmt_counts(const std::vector<long>& counts) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) os << ",";
    os << counts[i];
  }
  os << "]";
  return os.str();
}

struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std_dev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace

BuiltDataset build_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
  BuiltDataset out;
  if (cfg.generator) {
    const GeneratedData data = generate_dataset(*cfg.generator, seed);
    out.dataset = std::make_unique<Dataset>(make_open_world_split(
        data.pool, data.test, data.num_classes, cfg.split.base_fraction,
        cfg.split.shots_per_class, seed));
    out.pretrain_pool = data.pretrain;
    return out;
  }
  const CsvSpec& c = *cfg.csv;
  const CsvLoadResult rows =
      load_csv(c.path, c.feature_columns, c.label_column, c.split_column);
  if (rows.has_split) {
    out.dataset = std::make_unique<Dataset>(dataset_from_tagged_rows(rows));
  } else {
    // seeded split: hold out 20% as test, rest is the pool
    std::vector<Example> pool = rows.rows;
    Rng rng = make_stream(seed, {0xc5f5u});
    for (std::size_t i = pool.size() - 1; i > 0; --i) {
      std::size_t j = rng.next_below(i + 1);
      std::swap(pool[i], pool[j]);
    }
    const std::size_t test_n = std::max<std::size_t>(1, pool.size() / 5);
    std::vector<Example> test(pool.end() - test_n, pool.end());
    pool.resize(pool.size() - test_n);
    const int num_classes = static_cast<int>(rows.label_names.size());
    out.dataset = std::make_unique<Dataset>(
        make_open_world_split(pool, test, num_classes, cfg.split.base_fraction,
                              cfg.split.shots_per_class, seed));
  }
  // CSV runs pretrain on the labeled split itself
  out.pretrain_pool = out.dataset->labeled();
  return out;
}

std::vector<std::unique_ptr<BaseLearner>> build_learners(
    const ExperimentConfig& cfg, const Dataset& dataset,
    const std::vector<Example>& pretrain_pool, std::uint64_t seed) {
  const std::vector<LearnerSpec> slots = expand_learner_slots(cfg);
  std::vector<std::unique_ptr<BaseLearner>> out;
  out.reserve(slots.size());
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const LearnerSpec& spec = slots[j];
    const std::uint64_t slot_seed =
        Rng::mix(Rng::mix(seed, 0x1ea54e5u), static_cast<std::uint64_t>(j));
    std::unique_ptr<BaseLearner> learner;
    if (spec.family == "logistic") {
      LogisticLearner::Config lc;
      lc.l2 = spec.l2;
      lc.pretrain_epochs = spec.pretrain_epochs;
      lc.pretrain_lr = spec.pretrain_lr;
      lc.init_seed = slot_seed;
      learner = std::make_unique<LogisticLearner>(lc);
    } else if (spec.family == "centroid") {
      learner = std::make_unique<CentroidLearner>();
    } else if (spec.family == "knn") {
      learner = std::make_unique<KnnLearner>(spec.knn_k);
    } else if (spec.family == "noisy_oracle") {
      NoisyOracleLearner::Config oc;
      oc.per_class_accuracy = spec.oracle_accuracy;
      if (oc.per_class_accuracy.empty())
        oc.per_class_accuracy.assign(dataset.num_classes(), 0.9);
      oc.accuracy_schedule = spec.oracle_schedule;
      oc.confusion_row = spec.oracle_confusion_row;
      oc.vary_with_round = spec.oracle_vary_with_round;
      oc.seed = slot_seed;
      learner = std::make_unique<NoisyOracleLearner>(
          oc, OracleView(dataset).full_truth_map());
    } else {
      throw InvalidParams("unknown learner family '" + spec.family + "'");
    }

    // per-slot pretrain subsample: a seeded fraction of each class's
    // examples, at least one per class, for learner diversity
    std::map<int, std::vector<const Example*>> by_class;
    for (const Example& e : pretrain_pool) by_class[*e.label].push_back(&e);
    std::vector<Example> sample;
    for (auto& [c, items] : by_class) {
      Rng rng = make_stream(slot_seed, {0x9e17u, static_cast<std::uint64_t>(c)});
      std::vector<const Example*> shuffled = items;
      for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
        std::size_t jj = rng.next_below(i + 1);
        std::swap(shuffled[i], shuffled[jj]);
      }
      const std::size_t take = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::ceil(0.8 * static_cast<double>(shuffled.size()))));
      for (std::size_t i = 0; i < take; ++i) sample.push_back(*shuffled[i]);
    }
    learner->pretrain(sample, dataset.num_classes());
    out.push_back(std::move(learner));
  }
  return out;
}

SeedRunResult run_single_seed(const ExperimentConfig& cfg,
                              std::uint64_t seed) {
  SeedRunResult res;
  res.seed = seed;

  BuiltDataset built = build_dataset(cfg, seed);
  const Dataset& dataset = *built.dataset;

  EnsembleState state(
      build_learners(cfg, dataset, built.pretrain_pool, seed));
  RunConfig run_cfg = cfg.run;
  run_cfg.seed = Rng::mix(run_cfg.seed, seed);
  warmup(state, dataset, run_cfg);

  const AugmentConfig augment = AugmentConfig::from_dataset(
      dataset, Rng::mix(seed, 0xa06u), cfg.augment.weak_scale,
      cfg.augment.strong_scale, cfg.augment.dropout);

  std::vector<const BaseLearner*> live;
  for (const auto& l : state.learners) live.push_back(l.get());
  const EvalReport baseline = evaluate_ensemble(live, dataset, 0);
  res.baseline_accuracy = baseline.overall_accuracy;
  res.baseline_hm = baseline.harmonic_mean;

  res.history = run(state, dataset, run_cfg, augment);

  const EvalReport final_eval =
      evaluate_ensemble(live, dataset, state.round + 1);
  res.final_accuracy = final_eval.overall_accuracy;
  res.final_hm = final_eval.harmonic_mean;

  // round-history payload: one line per model per round plus a round line
  std::ostringstream nd;
  for (const RoundRecord& rr : res.history) {
    for (std::size_t j = 0; j < rr.models.size(); ++j) {
      const ModelRoundRecord& m = rr.models[j];
      nd << "{\"schema_version\":1,\"seed\":" << seed
         << ",\"round\":" << rr.round << ",\"model\":" << j
         << ",\"measured_error\":" << fmt(m.measured_error)
         << ",\"prev_error\":" << fmt(m.prev_error)
         << ",\"error_improved\":" << (m.error_improved ? "true" : "false")
         << ",\"gate_passed\":" << (m.gate_passed ? "true" : "false")
         << ",\"bootstrap\":" << (m.bootstrap_applied ? "true" : "false")
         << ",\"updated\":" << (m.updated ? "true" : "false")
         << ",\"budget\":" << m.budget << ",\"inter_size\":" << m.inter_size
         << ",\"intra_size\":" << m.intra_size
         << ",\"candidate_size\":" << m.candidate_size
         << ",\"accepted_size\":" << m.accepted_size
         << ",\"prev_count_after\":" << m.prev_count_after
         << ",\"pseudo_accuracy\":" << fmt_opt(m.pseudo_accuracy)
         << ",\"peer_accuracy_mean\":" << fmt_opt(m.peer_accuracy_mean)
         << ",\"accepted_class_counts\":" << fmt_counts(m.accepted_class_counts)
         << ",\"test_accuracy\":" << fmt(m.test_accuracy) << "}\n";
    }
    nd << "{\"schema_version\":1,\"seed\":" << seed
       << ",\"round\":" << rr.round << ",\"model\":null,\"updates\":"
       << rr.updates << ",\"ensemble_overall_accuracy\":"
       << fmt(rr.ensemble_overall_accuracy) << ",\"ensemble_hm\":"
       << fmt_opt(rr.ensemble_harmonic_mean) << "}\n";
  }
  res.rounds_payload = nd.str();

  std::ostringstream sum;
  sum << "{\"schema_version\":1,\"seed\":" << seed
      << ",\"rounds\":" << res.history.size()
      << ",\"baseline_overall_accuracy\":" << fmt(res.baseline_accuracy)
      << ",\"baseline_hm\":" << fmt_opt(res.baseline_hm)
      << ",\"final_overall_accuracy\":" << fmt(res.final_accuracy)
      << ",\"final_hm\":" << fmt_opt(res.final_hm) << "}\n";
  res.summary_payload = sum.str();
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool write_files) {
  cfg.validate();
  namespace fs = std::filesystem;
  ExperimentResult result;
  for (std::uint64_t seed : cfg.seeds)
    result.seeds.push_back(run_single_seed(cfg, seed));

  std::vector<double> finals, baselines, hms;
  for (const SeedRunResult& s : result.seeds) {
    finals.push_back(s.final_accuracy);
    baselines.push_back(s.baseline_accuracy);
    if (s.final_hm) hms.push_back(*s.final_hm);
  }
  const MeanStd f = mean_std(finals);
  const MeanStd b = mean_std(baselines);
  std::ostringstream agg;
  agg << "{\"schema_version\":1,\"num_seeds\":" << result.seeds.size()
      << ",\"baseline_overall_accuracy\":{\"mean\":" << fmt(b.mean)
      << ",\"std\":" << fmt(b.std_dev) << "}"
      << ",\"final_overall_accuracy\":{\"mean\":" << fmt(f.mean)
      << ",\"std\":" << fmt(f.std_dev) << "}";
  if (hms.size() == result.seeds.size()) {
    const MeanStd h = mean_std(hms);
    agg << ",\"final_hm\":{\"mean\":" << fmt(h.mean) << ",\"std\":"
        << fmt(h.std_dev) << "}";
  } else {
    agg << ",\"final_hm\":null";
  }
  agg << ",\"improvement_mean\":" << fmt(f.mean - b.mean) << "}\n";
  result.aggregate_payload = agg.str();

  if (write_files) {
    fs::create_directories(cfg.output_dir);
    for (const SeedRunResult& s : result.seeds) {
      const fs::path dir =
          fs::path(cfg.output_dir) / ("seed_" + std::to_string(s.seed));
      fs::create_directories(dir);
      std::ofstream(dir / "rounds.ndjson") << s.rounds_payload;
      std::ofstream(dir / "summary.json") << s.summary_payload;

      // plot data: pseudo-label accuracy, class shares, error-ratio pairs
      std::ofstream pacc(dir / "plot_pseudo_accuracy.ndjson");
      std::ofstream shares(dir / "plot_class_shares.ndjson");
      std::ofstream ratios(dir / "plot_error_ratio.ndjson");
      for (const RoundRecord& rr : s.history) {
        for (std::size_t j = 0; j < rr.models.size(); ++j) {
          const ModelRoundRecord& m = rr.models[j];
          if (!m.updated) continue;
          pacc << "{\"schema_version\":1,\"round\":" << rr.round
               << ",\"model\":" << j << ",\"pseudo_accuracy\":"
               << fmt_opt(m.pseudo_accuracy) << "}\n";
          shares << "{\"schema_version\":1,\"round\":" << rr.round
                 << ",\"model\":" << j
                 << ",\"inter_counts\":" << fmt_counts(m.inter_class_counts)
                 << ",\"accepted_counts\":"
                 << fmt_counts(m.accepted_class_counts) << "}\n";
        }
      }
      const int k = s.history.empty()
                        ? 0
                        : static_cast<int>(s.history.front().models.size());
      for (int j = 0; j < k; ++j) {
        for (const ErrorRatioPoint& p :
             error_ratio_track(s.history, j, cfg.run.alpha)) {
          ratios << "{\"schema_version\":1,\"round\":" << p.round
                 << ",\"model\":" << j << ",\"estimated_ratio\":"
                 << fmt(p.estimated_ratio) << ",\"estimated_ratio_power\":"
                 << fmt(p.estimated_ratio_power) << ",\"true_ratio\":"
                 << fmt_opt(p.true_ratio) << "}\n";
        }
      }
    }
    std::ofstream(fs::path(cfg.output_dir) / "aggregate.json")
        << result.aggregate_payload;
  }
  return result;
}

}  // namespace bicog

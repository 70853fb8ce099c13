#include "bicog/metrics.hpp"

#include <cmath>

namespace bicog {

int OracleView::truth(ExampleId id) const {
  auto it = dataset_->hidden_truth_.find(id);
  if (it != dataset_->hidden_truth_.end()) return it->second;
  for (const Example& e : dataset_->labeled_)
    if (e.id == id) return *e.label;
  for (const Example& e : dataset_->test_)
    if (e.id == id) return *e.label;
  throw UnknownId("oracle view: unknown example id");
}

std::unordered_map<ExampleId, int> OracleView::full_truth_map() const {
  std::unordered_map<ExampleId, int> out = dataset_->hidden_truth_;
  for (const Example& e : dataset_->labeled_) out[e.id] = *e.label;
  for (const Example& e : dataset_->test_) out[e.id] = *e.label;
  return out;
}

double harmonic_mean(double a, double b) {
  if (a + b == 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

EvalReport evaluate(const Predictor& predict, const std::vector<Example>& test,
                    int num_classes, const std::vector<int>& base_classes,
                    bool require_hm) {
  if (test.empty()) throw InvalidParams("evaluate: empty test split");
  std::vector<long> correct(num_classes, 0), total(num_classes, 0);
  for (const Example& e : test) {
    ++total[*e.label];
    if (predict(e) == *e.label) ++correct[*e.label];
  }
  EvalReport r;
  long all_correct = 0, all_total = 0;
  long base_correct = 0, base_total = 0, novel_correct = 0, novel_total = 0;
  std::vector<bool> is_base(num_classes, false);
  for (int c : base_classes) is_base[c] = true;
  r.per_class_accuracy.assign(num_classes, 0.0);
  for (int c = 0; c < num_classes; ++c) {
    all_correct += correct[c];
    all_total += total[c];
    if (total[c] > 0)
      r.per_class_accuracy[c] =
          static_cast<double>(correct[c]) / static_cast<double>(total[c]);
    if (is_base[c]) {
      base_correct += correct[c];
      base_total += total[c];
    } else {
      novel_correct += correct[c];
      novel_total += total[c];
    }
  }
  r.overall_accuracy =
      static_cast<double>(all_correct) / static_cast<double>(all_total);
  if (base_total > 0)
    r.base_accuracy =
        static_cast<double>(base_correct) / static_cast<double>(base_total);
  if (novel_total > 0)
    r.novel_accuracy =
        static_cast<double>(novel_correct) / static_cast<double>(novel_total);
  if (r.base_accuracy && r.novel_accuracy) {
    r.harmonic_mean = harmonic_mean(*r.base_accuracy, *r.novel_accuracy);
  } else if (require_hm) {
    throw EmptySubset("evaluate: HM requested but a base/novel subset is empty");
  }
  return r;
}

EvalReport evaluate_learner(const BaseLearner& learner, const Dataset& d,
                            int round, bool require_hm) {
  return evaluate([&](const Example& e) { return learner.predict(e, round); },
                  d.test(), d.num_classes(), d.base_classes(), require_hm);
}

EvalReport evaluate_ensemble(const std::vector<const BaseLearner*>& learners,
                             const Dataset& d, int round, bool require_hm) {
  if (learners.empty()) throw InvalidParams("evaluate_ensemble: no learners");
  auto predict = [&](const Example& e) {
    std::vector<int> counts(d.num_classes(), 0);
    std::vector<int> preds;
    preds.reserve(learners.size());
    for (const BaseLearner* m : learners) preds.push_back(m->predict(e, round));
    for (int p : preds) ++counts[p];
    int best = 0;
    int best_count = counts[0];
    bool unique = true;
    for (int c = 1; c < d.num_classes(); ++c) {
      if (counts[c] > best_count) {
        best_count = counts[c];
        best = c;
        unique = true;
      } else if (counts[c] == best_count) {
        unique = false;
      }
    }
    return unique ? best : preds.front();  // abstention -> model 1
  };
  return evaluate(predict, d.test(), d.num_classes(), d.base_classes(),
                  require_hm);
}

std::optional<double> pseudo_label_accuracy(const PseudoLabeledSet& set,
                                            const OracleView& oracle) {
  if (set.empty()) return std::nullopt;
  long correct = 0;
  for (const auto& [id, label] : set.entries)
    if (oracle.truth(id) == label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(set.size());
}

DistributionStats distribution_stats(const PseudoLabeledSet& set,
                                     int num_classes) {
  DistributionStats s;
  s.class_counts.assign(num_classes, 0);
  for (const auto& [id, label] : set.entries) ++s.class_counts.at(label);
  if (set.empty()) return s;
  const double total = static_cast<double>(set.size());
  const double uniform = 1.0 / static_cast<double>(num_classes);
  for (long n : s.class_counts) {
    const double share = static_cast<double>(n) / total;
    s.max_share = std::max(s.max_share, share);
    if (share > 0.0) {
      s.entropy -= share * std::log(share);
      s.kl_to_uniform += share * std::log(share / uniform);
    }
  }
  return s;
}

std::vector<ErrorRatioPoint> error_ratio_track(
    const std::vector<RoundRecord>& history, int model_index, double alpha) {
  std::vector<ErrorRatioPoint> out;
  std::optional<double> prev_true;
  for (const RoundRecord& rr : history) {
    const ModelRoundRecord& m = rr.models.at(model_index);
    if (!m.updated) continue;
    std::optional<double> true_err;
    if (m.pseudo_accuracy) true_err = 1.0 - *m.pseudo_accuracy;
    if (m.prev_error > 0.0) {
      ErrorRatioPoint p;
      p.round = rr.round;
      p.estimated_ratio = m.measured_error / m.prev_error;
      p.estimated_ratio_power =
          std::pow(p.estimated_ratio, alpha * rr.round);
      if (true_err && prev_true && *prev_true > 0.0)
        p.true_ratio = *true_err / *prev_true;
      out.push_back(p);
    }
    prev_true = true_err;
  }
  return out;
}

}  // namespace bicog

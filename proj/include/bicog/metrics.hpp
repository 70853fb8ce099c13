#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bicog/core.hpp"
#include "bicog/learners.hpp"
#include "bicog/record.hpp"

namespace bicog {

// The only window onto the hidden ground truth of unlabeled examples.
class OracleView {
 public:
  explicit OracleView(const Dataset& d) : dataset_(&d) {}

  int truth(ExampleId id) const;
  // full truth map (labeled + unlabeled + test); used to construct scripted
  // oracle learners, which are flagged in reports
  std::unordered_map<ExampleId, int> full_truth_map() const;

 private:
  const Dataset* dataset_;
};

struct EvalReport {
  double overall_accuracy = 0.0;
  std::optional<double> base_accuracy;
  std::optional<double> novel_accuracy;
  std::optional<double> harmonic_mean;
  std::vector<double> per_class_accuracy;
};

using Predictor = std::function<int(const Example&)>;

double harmonic_mean(double a, double b);

// Accuracies on the test split; HM requested iff both base and novel
// subsets are non-empty (EmptySubset when require_hm is set and one is
// missing).
EvalReport evaluate(const Predictor& predict, const std::vector<Example>& test,
                    int num_classes, const std::vector<int>& base_classes,
                    bool require_hm = false);

EvalReport evaluate_learner(const BaseLearner& learner, const Dataset& d,
                            int round = 0, bool require_hm = false);

// Unique-argmax majority over all K learners; abstentions fall back to the
// first model's prediction.
EvalReport evaluate_ensemble(const std::vector<const BaseLearner*>& learners,
                             const Dataset& d, int round = 0,
                             bool require_hm = false);

// Fraction of pseudo-labels matching hidden truth; empty set is undefined.
std::optional<double> pseudo_label_accuracy(const PseudoLabeledSet& set,
                                            const OracleView& oracle);

struct DistributionStats {
  std::vector<long> class_counts;
  double max_share = 0.0;
  double entropy = 0.0;        // natural log
  double kl_to_uniform = 0.0;
};

DistributionStats distribution_stats(const PseudoLabeledSet& set,
                                     int num_classes);

struct ErrorRatioPoint {
  int round = 0;
  double estimated_ratio = 0.0;        // e_hat_t / e_hat_{t-1}
  double estimated_ratio_power = 0.0;  // (e_hat_t / e_hat_{t-1})^{alpha t}
  std::optional<double> true_ratio;    // on accepted pseudo-labels
};

// Estimated vs. true error-ratio pairs for one model across its update
// rounds; rounds where the model did not update emit nothing.
std::vector<ErrorRatioPoint> error_ratio_track(
    const std::vector<RoundRecord>& history, int model_index, double alpha);

}  // namespace bicog

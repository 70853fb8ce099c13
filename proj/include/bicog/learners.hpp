#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bicog/core.hpp"

namespace bicog {

// Pluggable base-learner contract. pretrain establishes a classifier over
// the full label space [0, C); fine_tune warm-starts from the current
// parameters. predict is deterministic given fixed internal parameters.
class BaseLearner {
 public:
  virtual ~BaseLearner() = default;

  virtual void pretrain(std::span<const Example> sample, int num_classes) = 0;
  virtual void fine_tune(const std::vector<Example>& train, int epochs,
                         double learning_rate) = 0;
  virtual int predict(const Example& x, int round = 0) const = 0;

  std::vector<int> predict_batch(std::span<const Example> xs,
                                 int round = 0) const {
    std::vector<int> out;
    out.reserve(xs.size());
    for (const Example& x : xs) out.push_back(predict(x, round));
    return out;
  }

  virtual void snapshot() = 0;
  virtual void restore() = 0;
  virtual std::unique_ptr<BaseLearner> clone() const = 0;
  virtual std::string name() const = 0;
  virtual bool uses_oracle() const { return false; }
};

// Nearest-centroid classifier. Centroids for classes absent from a
// fine-tune batch keep their previous values; ties break to the lowest
// class index.
class CentroidLearner : public BaseLearner {
 public:
  CentroidLearner() = default;

  void pretrain(std::span<const Example> sample, int num_classes) override;
  void fine_tune(const std::vector<Example>& train, int epochs,
                 double learning_rate) override;
  int predict(const Example& x, int round = 0) const override;
  void snapshot() override { saved_ = centroids_; }
  void restore() override { centroids_ = saved_; }
  std::unique_ptr<BaseLearner> clone() const override {
    return std::make_unique<CentroidLearner>(*this);
  }
  std::string name() const override { return "centroid"; }

  const std::unordered_map<int, std::vector<double>>& centroids() const {
    return centroids_;
  }

 private:
  void fit(std::span<const Example> train);
  std::unordered_map<int, std::vector<double>> centroids_;
  std::unordered_map<int, std::vector<double>> saved_;
};

// Multinomial logistic regression, full-batch gradient descent on
// cross-entropy with L2 penalty on the weights (not the biases).
class LogisticLearner : public BaseLearner {
 public:
  struct Config {
    double l2 = 1e-3;
    int pretrain_epochs = 50;
    double pretrain_lr = 0.5;
    std::uint64_t init_seed = 0;
  };

  LogisticLearner() = default;
  explicit LogisticLearner(Config cfg) : cfg_(cfg) {}

  void pretrain(std::span<const Example> sample, int num_classes) override;
  void fine_tune(const std::vector<Example>& train, int epochs,
                 double learning_rate) override;
  int predict(const Example& x, int round = 0) const override;
  void snapshot() override;
  void restore() override;
  std::unique_ptr<BaseLearner> clone() const override {
    return std::make_unique<LogisticLearner>(*this);
  }
  std::string name() const override { return "logistic"; }

  // mean cross-entropy + (l2/2)*||W||^2 on a batch; exposed for tests
  double loss(std::span<const Example> batch) const;
  // flat gradient in (W, b) layout matching parameters(); exposed for the
  // finite-difference check
  std::vector<double> gradient(std::span<const Example> batch) const;
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }
  int num_classes() const { return num_classes_; }
  int dim() const { return dim_; }

 private:
  void init(int dim, int num_classes);
  void softmax_row(const Example& x, std::vector<double>& probs) const;

  Config cfg_{};
  int dim_ = 0;
  int num_classes_ = 0;
  std::vector<double> params_;  // C*d weights then C biases
  std::vector<double> saved_;
};

// k-nearest-neighbour classifier over its training memory. Distance ties
// break by lower example id, label ties by lower class index.
class KnnLearner : public BaseLearner {
 public:
  explicit KnnLearner(int k = 3) : k_(k) {
    if (k < 1) throw InvalidParams("knn: k must be >= 1");
  }

  void pretrain(std::span<const Example> sample, int num_classes) override;
  void fine_tune(const std::vector<Example>& train, int epochs,
                 double learning_rate) override;
  int predict(const Example& x, int round = 0) const override;
  void snapshot() override { saved_ = memory_; }
  void restore() override { memory_ = saved_; }
  std::unique_ptr<BaseLearner> clone() const override {
    return std::make_unique<KnnLearner>(*this);
  }
  std::string name() const override { return "knn"; }

 private:
  int k_;
  int num_classes_ = 0;
  std::vector<Example> memory_;
  std::vector<Example> saved_;
};

// Scripted stochastic oracle: predicts the hidden ground truth with a
// configurable per-class probability, otherwise a wrong label drawn
// uniformly or from a confusion row. Draws are keyed by
// (seed, example id, round, feature bytes), so a given view is
// reproducible bit-for-bit while augmented views get independent draws.
class NoisyOracleLearner : public BaseLearner {
 public:
  struct Config {
    std::vector<double> per_class_accuracy;  // size C
    // optional flat accuracy per round; overrides per_class_accuracy when
    // round < schedule size (last entry persists beyond it)
    std::vector<double> accuracy_schedule;
    // optional weights over predicted labels used for wrong predictions;
    // the truth class weight is zeroed and the row renormalized
    std::vector<double> confusion_row;
    std::uint64_t seed = 0;
    bool vary_with_round = true;
  };

  NoisyOracleLearner(Config cfg, std::unordered_map<ExampleId, int> truth);

  void pretrain(std::span<const Example> sample, int num_classes) override;
  void fine_tune(const std::vector<Example>& train, int epochs,
                 double learning_rate) override {}
  int predict(const Example& x, int round = 0) const override;
  void snapshot() override {}
  void restore() override {}
  std::unique_ptr<BaseLearner> clone() const override {
    return std::make_unique<NoisyOracleLearner>(*this);
  }
  std::string name() const override { return "noisy_oracle"; }
  bool uses_oracle() const override { return true; }

 private:
  double accuracy_for(int truth_class, int round) const;

  Config cfg_{};
  std::unordered_map<ExampleId, int> truth_;
  int num_classes_ = 0;
};

}  // namespace bicog

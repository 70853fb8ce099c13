#include "bicog/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bicog/rng.hpp"

namespace bicog {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("feature width mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- centroid

void CentroidLearner::fit(std::span<const Example> train) {
  std::unordered_map<int, std::pair<std::vector<double>, int>> acc;
  for (const Example& e : train) {
    if (!e.label) continue;
    auto& [sum, n] = acc[*e.label];
    if (sum.empty()) sum.assign(e.features.size(), 0.0);
    if (sum.size() != e.features.size())
      throw DimensionMismatch("centroid: feature width mismatch");
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += e.features[i];
    ++n;
  }
  for (auto& [c, sn] : acc) {
    auto& [sum, n] = sn;
    for (double& v : sum) v /= n;
    centroids_[c] = sum;  // classes absent from train keep old centroids
  }
}

void CentroidLearner::pretrain(std::span<const Example> sample,
                               int num_classes) {
  fit(sample);
  for (int c = 0; c < num_classes; ++c) {
    if (!centroids_.count(c))
      throw NoPrototype("centroid: class " + std::to_string(c) +
                        " absent from pretrain sample");
  }
}

void CentroidLearner::fine_tune(const std::vector<Example>& train, int epochs,
                                double) {
  if (epochs <= 0) return;
  fit(train);
}

int CentroidLearner::predict(const Example& x, int) const {
  if (centroids_.empty())
    throw NoPrototype("centroid: no class has been seen");
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  std::vector<int> classes;
  classes.reserve(centroids_.size());
  for (const auto& [c, _] : centroids_) classes.push_back(c);
  std::sort(classes.begin(), classes.end());
  for (int c : classes) {
    const double d = sq_dist(x.features, centroids_.at(c));
    if (d < best_d) {  // strict: ties keep the lowest class index
      best_d = d;
      best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------- logistic

void LogisticLearner::init(int dim, int num_classes) {
  dim_ = dim;
  num_classes_ = num_classes;
  params_.assign(static_cast<std::size_t>(num_classes_) * dim_ + num_classes_,
                 0.0);
  Rng rng = make_stream(cfg_.init_seed, {0x10617u});
  for (std::size_t i = 0; i < static_cast<std::size_t>(num_classes_) * dim_; ++i)
    params_[i] = 0.01 * rng.next_gaussian();
}

void LogisticLearner::softmax_row(const Example& x,
                                  std::vector<double>& probs) const {
  if (static_cast<int>(x.features.size()) != dim_)
    throw DimensionMismatch("logistic: feature width mismatch");
  probs.assign(num_classes_, 0.0);
  double mx = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < num_classes_; ++c) {
    double z = params_[static_cast<std::size_t>(num_classes_) * dim_ + c];
    const double* w = &params_[static_cast<std::size_t>(c) * dim_];
    for (int i = 0; i < dim_; ++i) z += w[i] * x.features[i];
    probs[c] = z;
    mx = std::max(mx, z);
  }
  double sum = 0.0;
  for (double& p : probs) {
    p = std::exp(p - mx);
    sum += p;
  }
  for (double& p : probs) p /= sum;
}

double LogisticLearner::loss(std::span<const Example> batch) const {
  double total = 0.0;
  std::vector<double> probs;
  for (const Example& e : batch) {
    softmax_row(e, probs);
    total -= std::log(std::max(probs[*e.label], 1e-300));
  }
  total /= static_cast<double>(batch.size());
  double reg = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(num_classes_) * dim_; ++i)
    reg += params_[i] * params_[i];
  return total + 0.5 * cfg_.l2 * reg;
}

std::vector<double> LogisticLearner::gradient(
    std::span<const Example> batch) const {
  std::vector<double> grad(params_.size(), 0.0);
  std::vector<double> probs;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Example& e : batch) {
    softmax_row(e, probs);
    for (int c = 0; c < num_classes_; ++c) {
      const double delta =
          (probs[c] - (c == *e.label ? 1.0 : 0.0)) * inv_n;
      double* gw = &grad[static_cast<std::size_t>(c) * dim_];
      for (int i = 0; i < dim_; ++i) gw[i] += delta * e.features[i];
      grad[static_cast<std::size_t>(num_classes_) * dim_ + c] += delta;
    }
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(num_classes_) * dim_; ++i)
    grad[i] += cfg_.l2 * params_[i];
  return grad;
}

void LogisticLearner::pretrain(std::span<const Example> sample,
                               int num_classes) {
  if (sample.empty()) throw EmptyTrainSet("logistic: empty pretrain sample");
  init(static_cast<int>(sample.front().features.size()), num_classes);
  std::vector<Example> train(sample.begin(), sample.end());
  fine_tune(train, cfg_.pretrain_epochs, cfg_.pretrain_lr);
}

void LogisticLearner::fine_tune(const std::vector<Example>& train, int epochs,
                                double learning_rate) {
  if (train.empty()) throw EmptyTrainSet("logistic: empty train set");
  if (params_.empty())
    throw InvalidParams("logistic: fine_tune before pretrain");
  for (int ep = 0; ep < epochs; ++ep) {
    const std::vector<double> grad = gradient(train);
    for (std::size_t i = 0; i < params_.size(); ++i)
      params_[i] -= learning_rate * grad[i];
  }
}

int LogisticLearner::predict(const Example& x, int) const {
  if (params_.empty()) throw InvalidParams("logistic: predict before pretrain");
  std::vector<double> probs;
  softmax_row(x, probs);
  int best = 0;
  for (int c = 1; c < num_classes_; ++c)
    if (probs[c] > probs[best]) best = c;
  return best;
}

void LogisticLearner::snapshot() { saved_ = params_; }
void LogisticLearner::restore() { params_ = saved_; }

// --------------------------------------------------------------------- knn

void KnnLearner::pretrain(std::span<const Example> sample, int num_classes) {
  num_classes_ = num_classes;
  memory_.assign(sample.begin(), sample.end());
}

void KnnLearner::fine_tune(const std::vector<Example>& train, int epochs,
                           double) {
  if (epochs <= 0) return;
  if (train.empty()) throw EmptyTrainSet("knn: empty train set");
  memory_ = train;
}

int KnnLearner::predict(const Example& x, int) const {
  if (memory_.empty()) throw EmptyTrainSet("knn: empty memory");
  const int k = std::min<int>(k_, static_cast<int>(memory_.size()));
  std::vector<std::size_t> order(memory_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> dist(memory_.size());
  for (std::size_t i = 0; i < memory_.size(); ++i)
    dist[i] = sq_dist(x.features, memory_[i].features);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (dist[a] != dist[b]) return dist[a] < dist[b];
                      return memory_[a].id < memory_[b].id;
                    });
  std::vector<int> votes(std::max(num_classes_, 1), 0);
  for (int i = 0; i < k; ++i) {
    const int c = *memory_[order[i]].label;
    if (c >= static_cast<int>(votes.size())) votes.resize(c + 1, 0);
    ++votes[c];
  }
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c)
    if (votes[c] > votes[best]) best = static_cast<int>(c);
  return best;
}

// ------------------------------------------------------------ noisy oracle

NoisyOracleLearner::NoisyOracleLearner(
    Config cfg, std::unordered_map<ExampleId, int> truth)
    : cfg_(std::move(cfg)), truth_(std::move(truth)) {
  num_classes_ = static_cast<int>(cfg_.per_class_accuracy.size());
  for (double p : cfg_.per_class_accuracy)
    if (p < 0.0 || p > 1.0)
      throw InvalidParams("oracle: accuracy outside [0,1]");
}

void NoisyOracleLearner::pretrain(std::span<const Example>, int num_classes) {
  if (num_classes_ == 0) {
    num_classes_ = num_classes;
    cfg_.per_class_accuracy.assign(num_classes, 1.0);
  }
  if (num_classes != num_classes_)
    throw InvalidParams("oracle: class count mismatch");
}

double NoisyOracleLearner::accuracy_for(int truth_class, int round) const {
  if (!cfg_.accuracy_schedule.empty()) {
    const int i = std::min<int>(round, static_cast<int>(
                                           cfg_.accuracy_schedule.size()) - 1);
    return cfg_.accuracy_schedule[std::max(i, 0)];
  }
  return cfg_.per_class_accuracy.at(truth_class);
}

int NoisyOracleLearner::predict(const Example& x, int round) const {
  auto it = truth_.find(x.id);
  if (it == truth_.end()) throw UnknownId("oracle: no ground truth for id");
  const int truth = it->second;
  const std::uint64_t r =
      cfg_.vary_with_round ? static_cast<std::uint64_t>(round) : 0;
  Rng rng = make_stream(cfg_.seed,
                        {0x0a3cu, static_cast<std::uint64_t>(x.id), r,
                         hash_features(x.features)});
  if (rng.next_double() < accuracy_for(truth, round)) return truth;
  if (num_classes_ <= 1) return truth;
  if (!cfg_.confusion_row.empty()) {
    // truth class zeroed, remaining weights renormalized
    double total = 0.0;
    for (int c = 0; c < num_classes_; ++c)
      if (c != truth) total += cfg_.confusion_row.at(c);
    if (total > 0.0) {
      double u = rng.next_double() * total;
      for (int c = 0; c < num_classes_; ++c) {
        if (c == truth) continue;
        u -= cfg_.confusion_row.at(c);
        if (u <= 0.0) return c;
      }
    }
  }
  const std::uint64_t w = rng.next_below(num_classes_ - 1);
  const int wrong = static_cast<int>(w);
  return wrong >= truth ? wrong + 1 : wrong;
}

}  // namespace bicog

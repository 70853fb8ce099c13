#include "bicog/augment.hpp"

#include <cmath>

#include "bicog/rng.hpp"

namespace bicog {

namespace {
constexpr std::uint64_t kWeakTag = 0x77eaau;
constexpr std::uint64_t kStrongTag = 0x5712u;
}  // namespace

void AugmentConfig::validate() const {
  if (weak_noise_sigma < 0.0 || strong_noise_sigma < 0.0)
    throw InvalidParams("augment: negative noise sigma");
  if (strong_noise_sigma < weak_noise_sigma)
    throw InvalidParams("augment: strong sigma must be >= weak sigma");
  if (strong_dropout_prob < 0.0 || strong_dropout_prob >= 1.0)
    throw InvalidParams("augment: dropout probability must be in [0,1)");
}

AugmentConfig AugmentConfig::from_dataset(const Dataset& d, std::uint64_t seed,
                                          double weak_scale,
                                          double strong_scale,
                                          double dropout) {
  const int dim = d.dim();
  std::vector<double> mean(dim, 0.0), m2(dim, 0.0);
  long n = 0;
  auto accumulate = [&](const std::vector<Example>& xs) {
    for (const Example& e : xs) {
      ++n;
      for (int i = 0; i < dim; ++i) {
        const double delta = e.features[i] - mean[i];
        mean[i] += delta / n;
        m2[i] += delta * (e.features[i] - mean[i]);
      }
    }
  };
  accumulate(d.labeled());
  accumulate(d.unlabeled());
  double avg_std = 0.0;
  for (int i = 0; i < dim; ++i)
    avg_std += n > 1 ? std::sqrt(m2[i] / (n - 1)) : 0.0;
  avg_std /= dim;

  AugmentConfig cfg;
  cfg.weak_noise_sigma = weak_scale * avg_std;
  cfg.strong_noise_sigma = strong_scale * avg_std;
  cfg.strong_dropout_prob = dropout;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

std::vector<double> weak_augment(const std::vector<double>& features,
                                 ExampleId id, int round,
                                 const AugmentConfig& cfg) {
  cfg.validate();
  std::vector<double> out = features;
  if (cfg.weak_noise_sigma == 0.0) return out;
  Rng rng = make_stream(cfg.seed, {kWeakTag, static_cast<std::uint64_t>(id),
                                   static_cast<std::uint64_t>(round)});
  for (double& v : out) v += cfg.weak_noise_sigma * rng.next_gaussian();
  return out;
}

std::vector<double> strong_augment(const std::vector<double>& features,
                                   ExampleId id, int round,
                                   const AugmentConfig& cfg) {
  cfg.validate();
  std::vector<double> out = features;
  Rng rng = make_stream(cfg.seed, {kStrongTag, static_cast<std::uint64_t>(id),
                                   static_cast<std::uint64_t>(round)});
  if (cfg.strong_noise_sigma > 0.0)
    for (double& v : out) v += cfg.strong_noise_sigma * rng.next_gaussian();
  if (cfg.strong_dropout_prob > 0.0)
    for (double& v : out)
      if (rng.next_double() < cfg.strong_dropout_prob) v = 0.0;
  return out;
}

Example weak_view(const Example& x, int round, const AugmentConfig& cfg) {
  Example out = x;
  out.features = weak_augment(x.features, x.id, round, cfg);
  return out;
}

Example strong_view(const Example& x, int round, const AugmentConfig& cfg) {
  Example out = x;
  out.features = strong_augment(x.features, x.id, round, cfg);
  return out;
}

}  // namespace bicog

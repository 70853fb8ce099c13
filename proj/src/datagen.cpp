#include "bicog/datagen.hpp"

#include <cmath>
#include <numbers>

#include "bicog/rng.hpp"

namespace bicog {

namespace {

std::vector<std::vector<double>> blob_centroids(int num_classes, int dim,
                                                double separation,
                                                std::uint64_t seed) {
  // centroids drawn on a sphere of radius `separation`
  std::vector<std::vector<double>> centers(num_classes,
                                           std::vector<double>(dim, 0.0));
  for (int c = 0; c < num_classes; ++c) {
    Rng rng = make_stream(seed, {0xce117e5u, static_cast<std::uint64_t>(c)});
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) {
      centers[c][i] = rng.next_gaussian();
      norm += centers[c][i] * centers[c][i];
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : centers[c]) v *= separation / norm;
  }
  return centers;
}

Example blob_sample(const std::vector<double>& center, double noise,
                    ExampleId id, int label, Rng& rng) {
  Example e;
  e.id = id;
  e.label = label;
  e.features.resize(center.size());
  for (std::size_t i = 0; i < center.size(); ++i)
    e.features[i] = center[i] + noise * rng.next_gaussian();
  return e;
}

Example ring_sample(int label, double separation, double noise, int dim,
                    ExampleId id, Rng& rng) {
  // concentric annuli in the first two dimensions, noise elsewhere
  Example e;
  e.id = id;
  e.label = label;
  e.features.assign(dim, 0.0);
  const double radius = separation * (label + 1) + noise * rng.next_gaussian();
  const double theta = 2.0 * std::numbers::pi * rng.next_double();
  e.features[0] = radius * std::cos(theta);
  if (dim > 1) e.features[1] = radius * std::sin(theta);
  for (int i = 2; i < dim; ++i) e.features[i] = noise * rng.next_gaussian();
  return e;
}

}  // namespace

GeneratedData generate_dataset(const GeneratorParams& p, std::uint64_t seed) {
  if (p.num_classes < 2) throw InvalidParams("generator: num_classes >= 2");
  if (p.dim < 1) throw InvalidParams("generator: dim >= 1");
  if (p.train_per_class < 1 || p.test_per_class < 0 || p.pretrain_per_class < 0)
    throw InvalidParams("generator: invalid per-class sizes");
  if (p.separation < 0.0 || p.noise < 0.0)
    throw InvalidParams("generator: negative separation or noise");
  const bool blobs = p.name == "blobs" || p.name == "biased_blobs";
  if (!blobs && p.name != "rings")
    throw InvalidParams("generator: unknown name '" + p.name + "'");
  if (p.name == "biased_blobs" && p.bias_skew < 1.0)
    throw InvalidParams("generator: bias_skew must be >= 1");

  GeneratedData out;
  out.num_classes = p.num_classes;
  const auto centers =
      blobs ? blob_centroids(p.num_classes, p.dim, p.separation, seed)
            : std::vector<std::vector<double>>{};

  ExampleId next_id = 0;
  auto emit = [&](std::vector<Example>& dst, int label, int count,
                  std::uint64_t stream_tag) {
    Rng rng = make_stream(seed, {stream_tag, static_cast<std::uint64_t>(label)});
    for (int i = 0; i < count; ++i) {
      if (blobs)
        dst.push_back(blob_sample(centers[label], p.noise, next_id++, label, rng));
      else
        dst.push_back(ring_sample(label, p.separation, p.noise, p.dim,
                                  next_id++, rng));
    }
  };

  for (int c = 0; c < p.num_classes; ++c) {
    int n = p.train_per_class;
    if (p.name == "biased_blobs" && c == 0)
      n = static_cast<int>(std::lround(n * p.bias_skew));
    emit(out.pool, c, n, 0x7a11u);
  }
  for (int c = 0; c < p.num_classes; ++c)
    emit(out.test, c, p.test_per_class, 0x7e57u);
  for (int c = 0; c < p.num_classes; ++c)
    emit(out.pretrain, c, p.pretrain_per_class, 0x9e7au);
  return out;
}

Dataset make_ssl_split(const GeneratedData& data, int shots_per_class,
                       std::uint64_t seed) {
  return make_open_world_split(data.pool, data.test, data.num_classes,
                               /*base_fraction=*/1.0, shots_per_class, seed);
}

}  // namespace bicog

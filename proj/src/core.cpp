#include "bicog/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "bicog/learners.hpp"
#include "bicog/rng.hpp"

namespace bicog {

Dataset::Dataset(std::vector<Example> labeled, std::vector<Example> unlabeled,
                 std::unordered_map<ExampleId, int> hidden_truth,
                 std::vector<Example> test, int num_classes,
                 std::vector<int> base_classes)
    : labeled_(std::move(labeled)),
      unlabeled_(std::move(unlabeled)),
      hidden_truth_(std::move(hidden_truth)),
      test_(std::move(test)),
      num_classes_(num_classes),
      base_classes_(std::move(base_classes)) {
  if (num_classes_ < 1) throw InvalidParams("num_classes must be >= 1");
  if (labeled_.empty()) throw InvalidParams("labeled split must be non-empty");
}

bool Dataset::is_base_class(int c) const {
  return std::find(base_classes_.begin(), base_classes_.end(), c) !=
         base_classes_.end();
}

int Dataset::dim() const {
  return static_cast<int>(labeled_.front().features.size());
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::inter: return "inter";
    case Stage::intra: return "intra";
    case Stage::intersection: return "intersection";
    case Stage::final_set: return "final";
  }
  return "?";
}

EnsembleState::EnsembleState(std::vector<std::unique_ptr<BaseLearner>> models)
    : learners(std::move(models)) {
  if (learners.size() < 3)
    throw InvalidParams("ensemble requires K >= 3 learners");
  const auto k = learners.size();
  prev_error.assign(k, 0.5);
  prev_count.assign(k, 0);
  update_flags.assign(k, false);
}

Dataset make_open_world_split(const std::vector<Example>& pool,
                              std::vector<Example> test, int num_classes,
                              double base_fraction, int shots_per_class,
                              std::uint64_t seed) {
  if (num_classes < 2) throw InvalidParams("open-world split needs >= 2 classes");
  if (shots_per_class < 1) throw InvalidParams("shots_per_class must be >= 1");
  if (base_fraction <= 0.0 || base_fraction > 1.0)
    throw InvalidParams("base_fraction must be in (0, 1]");

  std::vector<int> class_order(num_classes);
  std::iota(class_order.begin(), class_order.end(), 0);
  Rng rng = make_stream(seed, {0x5117u});
  for (int i = num_classes - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(class_order[i], class_order[j]);
  }
  const int num_base =
      static_cast<int>(std::ceil(base_fraction * num_classes));
  std::vector<int> base_classes(class_order.begin(),
                                class_order.begin() + num_base);
  std::sort(base_classes.begin(), base_classes.end());

  // per base class, pick shots_per_class labeled examples under a seeded
  // shuffle of that class's pool indices
  std::vector<Example> labeled;
  std::set<ExampleId> labeled_ids;
  for (int c : base_classes) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].label && *pool[i].label == c) idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) < shots_per_class) {
      std::ostringstream os;
      os << "class " << c << " has " << idx.size() << " examples, need "
         << shots_per_class;
      throw InsufficientClassSamples(os.str());
    }
    Rng crng = make_stream(seed, {0x51ab5u, static_cast<std::uint64_t>(c)});
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      std::size_t j = crng.next_below(i + 1);
      std::swap(idx[i], idx[j]);
    }
    for (int s = 0; s < shots_per_class; ++s) {
      labeled.push_back(pool[idx[s]]);
      labeled_ids.insert(pool[idx[s]].id);
    }
  }

  std::vector<Example> unlabeled;
  std::unordered_map<ExampleId, int> truth;
  for (const Example& e : pool) {
    if (labeled_ids.count(e.id)) continue;
    if (!e.label) throw InvalidParams("pool example without label");
    truth[e.id] = *e.label;
    Example u = e;
    u.label.reset();
    unlabeled.push_back(std::move(u));
  }

  return Dataset(std::move(labeled), std::move(unlabeled), std::move(truth),
                 std::move(test), num_classes, std::move(base_classes));
}

std::vector<std::string> validate_dataset(const Dataset& d) {
  std::vector<std::string> out;
  std::set<ExampleId> seen;
  const int dim = d.labeled().empty()
                      ? -1
                      : static_cast<int>(d.labeled().front().features.size());
  auto scan = [&](const std::vector<Example>& xs, const char* split,
                  bool labels_expected) {
    for (const Example& e : xs) {
      if (!seen.insert(e.id).second) {
        std::ostringstream os;
        os << "duplicate id " << e.id << " (" << split << ")";
        out.push_back(os.str());
      }
      if (dim >= 0 && static_cast<int>(e.features.size()) != dim) {
        std::ostringstream os;
        os << "id " << e.id << ": dimension " << e.features.size()
           << " != " << dim;
        out.push_back(os.str());
      }
      if (labels_expected) {
        if (!e.label) {
          std::ostringstream os;
          os << "id " << e.id << ": missing label (" << split << ")";
          out.push_back(os.str());
        } else if (*e.label < 0 || *e.label >= d.num_classes()) {
          std::ostringstream os;
          os << "id " << e.id << ": label " << *e.label << " out of range [0,"
             << d.num_classes() << ")";
          out.push_back(os.str());
        }
      }
    }
  };
  scan(d.labeled(), "labeled", true);
  scan(d.unlabeled(), "unlabeled", false);
  scan(d.test(), "test", true);
  return out;
}

}  // namespace bicog

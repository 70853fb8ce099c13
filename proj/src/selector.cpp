#include "bicog/selector.hpp"

#include <algorithm>
#include <cmath>

#include "bicog/rng.hpp"

namespace bicog {

VoteTally tally_votes(ExampleId id, const std::vector<int>& peer_labels,
                      int num_classes) {
  VoteTally t;
  t.example_id = id;
  t.counts.assign(num_classes, 0);
  for (int y : peer_labels) {
    if (y < 0 || y >= num_classes)
      throw InvalidParams("vote: label out of range");
    ++t.counts[y];
  }
  int best = 0, best_count = -1;
  bool unique = false;
  for (int c = 0; c < num_classes; ++c) {
    if (t.counts[c] > best_count) {
      best_count = t.counts[c];
      best = c;
      unique = true;
    } else if (t.counts[c] == best_count) {
      unique = false;
    }
  }
  if (unique && best_count > 0) t.winner = {best, best_count};
  return t;
}

std::optional<int> vote_winner(const VoteTally& tally, int num_peers,
                               VoteMode mode) {
  if (!tally.winner) return std::nullopt;
  const auto [label, count] = *tally.winner;
  const bool ok = mode == VoteMode::paper
                      ? count >= (num_peers + 1) / 2
                      : 2 * count > num_peers;
  if (!ok) return std::nullopt;
  return label;
}

PseudoLabeledSet inter_consistency(
    const std::vector<Example>& unlabeled,
    const std::vector<std::vector<int>>& peer_predictions, int ensemble_k,
    VoteMode mode, int num_classes) {
  const int num_peers = ensemble_k - 1;
  if (static_cast<int>(peer_predictions.size()) != num_peers)
    throw PeerCountMismatch("inter_consistency: expected K-1 peer lists");
  for (const auto& preds : peer_predictions)
    if (preds.size() != unlabeled.size())
      throw PeerCountMismatch("inter_consistency: peer list length mismatch");

  PseudoLabeledSet out;
  out.stage = Stage::inter;
  std::vector<int> votes(num_peers);
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    for (int p = 0; p < num_peers; ++p) votes[p] = peer_predictions[p][i];
    const VoteTally t = tally_votes(unlabeled[i].id, votes, num_classes);
    if (auto y = vote_winner(t, num_peers, mode))
      out.entries.emplace(unlabeled[i].id, *y);
  }
  return out;
}

PseudoLabeledSet intra_consistency(const std::vector<Example>& unlabeled,
                                   const std::vector<const BaseLearner*>& peers,
                                   const AugmentConfig& augment, int round) {
  PseudoLabeledSet out;
  out.stage = Stage::intra;
  for (const Example& x : unlabeled) {
    const Example xw = weak_view(x, round, augment);
    const Example xs = strong_view(x, round, augment);
    int agreed = -1;
    bool keep = true;
    for (const BaseLearner* peer : peers) {
      const int p0 = peer->predict(x, round);
      if (peer->predict(xw, round) != p0 || peer->predict(xs, round) == p0) {
        keep = false;
        break;
      }
      if (agreed < 0) {
        agreed = p0;
      } else if (agreed != p0) {  // peers pass the view test but disagree
        keep = false;
        break;
      }
    }
    if (keep && agreed >= 0) out.entries.emplace(x.id, agreed);
  }
  return out;
}

PseudoLabeledSet intersect(const PseudoLabeledSet& a,
                           const PseudoLabeledSet& b) {
  PseudoLabeledSet out;
  out.stage = Stage::intersection;
  for (const auto& [id, label] : a.entries) {
    auto it = b.entries.find(id);
    if (it != b.entries.end() && it->second == label)
      out.entries.emplace(id, label);
  }
  return out;
}

ErrorEstimate measure_error(const std::vector<Example>& labeled,
                            const std::vector<const BaseLearner*>& peers,
                            VoteMode mode, int num_classes, int round,
                            bool count_no_consensus_as_error) {
  if (labeled.empty()) throw InvalidParams("measure_error: empty labeled set");
  const int num_peers = static_cast<int>(peers.size());
  long consensus = 0, wrong = 0, no_consensus = 0;
  std::vector<int> votes(num_peers);
  for (const Example& e : labeled) {
    for (int p = 0; p < num_peers; ++p) votes[p] = peers[p]->predict(e, round);
    const VoteTally t = tally_votes(e.id, votes, num_classes);
    const auto y = vote_winner(t, num_peers, mode);
    if (!y) {
      ++no_consensus;
      continue;
    }
    ++consensus;
    if (*y != *e.label) ++wrong;
  }
  ErrorEstimate est;
  if (count_no_consensus_as_error) {
    est.consensus_count = consensus;
    est.error_rate = static_cast<double>(wrong + no_consensus) /
                     static_cast<double>(labeled.size());
  } else {
    if (consensus == 0)
      throw NoConsensus("measure_error: no labeled sample reached consensus");
    est.consensus_count = consensus;
    est.error_rate = static_cast<double>(wrong) / static_cast<double>(consensus);
  }
  const double floor = 1.0 / (2.0 * static_cast<double>(labeled.size()));
  if (est.error_rate < floor) {
    est.error_rate = floor;
    est.floor_applied = true;
  }
  return est;
}

long budget(double e_prev, double e_cur, int t, double alpha, long l_prev,
            BudgetMode mode) {
  if (!(e_cur > 0.0) || !(e_cur < e_prev) || !(e_prev <= 1.0))
    throw InvalidErrorRatio("budget: requires 0 < e_cur < e_prev <= 1");
  if (t < 1 || alpha <= 0.0 || l_prev < 0)
    throw InvalidParams("budget: t >= 1, alpha > 0, l_prev >= 0");
  const long double ratio = static_cast<long double>(e_prev) /
                            static_cast<long double>(e_cur);
  const long double scaled =
      powl(ratio, static_cast<long double>(alpha) * t) *
      static_cast<long double>(l_prev);
  if (mode == BudgetMode::theorem)
    return static_cast<long>(ceill(scaled - 1.0L));
  return static_cast<long>(floorl(scaled));
}

bool lower_bound_ok(double e_prev, double e_cur, int t, double alpha,
                    long l_prev) {
  if (t < 1 || alpha <= 0.0)
    throw InvalidParams("lower_bound_ok: t >= 1, alpha > 0");
  if (!(e_cur > 0.0) || !(e_cur < e_prev)) return false;
  const long double at = static_cast<long double>(alpha) * t;
  const long double num = powl(static_cast<long double>(e_cur), at);
  const long double den = powl(static_cast<long double>(e_prev), at) - num;
  if (!(den > 0.0L)) return false;
  return static_cast<long double>(l_prev) > num / den;
}

long bootstrap_count(double e_prev, double e_cur, int t, double alpha) {
  if (!(e_cur > 0.0) || !(e_cur < e_prev))
    throw InvalidErrorRatio("bootstrap_count: requires 0 < e_cur < e_prev");
  const long double at = static_cast<long double>(alpha) * t;
  const long double num = powl(static_cast<long double>(e_cur), at);
  const long double den = powl(static_cast<long double>(e_prev), at) - num;
  return static_cast<long>(floorl(num / den)) + 1;
}

PseudoLabeledSet subsample(const PseudoLabeledSet& set, long n,
                           std::uint64_t seed, bool stratified,
                           int num_classes) {
  if (n < 0) throw InvalidParams("subsample: n must be >= 0");
  PseudoLabeledSet out;
  out.stage = Stage::final_set;
  if (n >= static_cast<long>(set.size())) {
    out.entries = set.entries;
    return out;
  }
  if (n == 0) return out;

  if (!stratified) {
    std::vector<std::pair<ExampleId, int>> items(set.entries.begin(),
                                                 set.entries.end());
    Rng rng = make_stream(seed, {0x5ab5a9u});
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      std::size_t j = rng.next_below(i + 1);
      std::swap(items[i], items[j]);
    }
    for (long i = 0; i < n; ++i) out.entries.insert(items[i]);
    return out;
  }

  // proportional per-class quotas with largest-remainder rounding
  std::map<int, std::vector<ExampleId>> by_class;
  for (const auto& [id, label] : set.entries) by_class[label].push_back(id);
  const double total = static_cast<double>(set.size());
  std::vector<std::pair<double, int>> remainders;  // (frac, class)
  std::map<int, long> quota;
  long assigned = 0;
  for (const auto& [c, ids] : by_class) {
    const double exact = n * static_cast<double>(ids.size()) / total;
    quota[c] = static_cast<long>(std::floor(exact));
    assigned += quota[c];
    remainders.push_back({exact - std::floor(exact), c});
  }
  std::sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t i = 0; assigned < n && i < remainders.size(); ++i) {
    const int c = remainders[i].second;
    if (quota[c] < static_cast<long>(by_class[c].size())) {
      ++quota[c];
      ++assigned;
    }
  }
  // remainder capping can leave a shortfall; fill from classes with room
  for (auto& [c, ids] : by_class) {
    while (assigned < n && quota[c] < static_cast<long>(ids.size())) {
      ++quota[c];
      ++assigned;
    }
  }
  for (auto& [c, ids] : by_class) {
    Rng rng = make_stream(seed, {0x57a7u, static_cast<std::uint64_t>(c)});
    for (std::size_t i = ids.size() - 1; i > 0; --i) {
      std::size_t j = rng.next_below(i + 1);
      std::swap(ids[i], ids[j]);
    }
    for (long i = 0; i < quota[c]; ++i) out.entries.emplace(ids[i], c);
  }
  return out;
}

}  // namespace bicog

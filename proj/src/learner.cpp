#include "pacteach/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pacteach/probability.hpp"

namespace pacteach {

namespace {

void check_inputs(const Instance& inst, const TeachingSet& s) {
  if (s.empty()) {
    throw std::invalid_argument("teaching set must contain at least one item");
  }
  for (const auto& item : s.items) {
    if (item.example < 0 || item.example >= inst.num_examples()) {
      throw std::invalid_argument("teaching example index out of range");
    }
  }
}

void check_partition(const Instance& inst, const GoodPartition& part) {
  if (part.num_concepts() != inst.num_concepts()) {
    throw std::invalid_argument("partition does not cover this instance's concepts");
  }
}

std::vector<bool> good_mask(const Instance& inst, const GoodPartition& part) {
  std::vector<bool> mask(static_cast<std::size_t>(inst.num_concepts()), false);
  for (const Index c : part.good) mask[static_cast<std::size_t>(c)] = true;
  return mask;
}

// Uniform pick among the concepts flagged in `tied`; consumes one draw.
Index pick_uniform(const std::vector<Index>& tied, SplitMix64& rng) {
  const auto n = static_cast<double>(tied.size());
  auto i = static_cast<std::size_t>(rng.uniform() * n);
  if (i >= tied.size()) i = tied.size() - 1;  // guard the 1.0-adjacent edge
  return tied[i];
}

}  // namespace

bool sample_l_consistency(const Instance& inst, Index c, const LabelledExample& item,
                          SplitMix64& rng) {
  const double keep = keep_probability(inst, c, item);
  return rng.uniform() < keep;
}

LearnerOutcome run_prudent(const Instance& inst, const TeachingSet& s,
                           const GoodPartition& part, SplitMix64& rng, TieRule tie) {
  check_inputs(inst, s);
  check_partition(inst, part);

  const Index n = inst.num_concepts();
  LearnerOutcome out;
  out.counts.assign(static_cast<std::size_t>(n), 0);
  for (Index c = 0; c < n; ++c) {
    for (const auto& item : s.items) {
      if (sample_l_consistency(inst, c, item, rng)) {
        ++out.counts[static_cast<std::size_t>(c)];
      }
    }
  }

  const int top = *std::max_element(out.counts.begin(), out.counts.end());
  std::vector<Index> tied;
  for (Index c = 0; c < n; ++c) {
    if (out.counts[static_cast<std::size_t>(c)] == top) tied.push_back(c);
  }

  const std::vector<bool> mask = good_mask(inst, part);
  if (tie == TieRule::WorstCase) {
    // An adversarial tie-break hands the win to a bad concept whenever
    // one reached the top count.
    Index pick = tied.front();
    bool all_good = true;
    for (const Index c : tied) {
      if (!mask[static_cast<std::size_t>(c)]) {
        all_good = false;
        pick = c;
        break;
      }
    }
    out.guessed = pick;
    out.was_good = all_good && top >= 1;
  } else {
    const Index pick = tied.size() > 1 ? pick_uniform(tied, rng) : tied.front();
    out.guessed = pick;
    out.was_good = mask[static_cast<std::size_t>(pick)];
  }
  return out;
}

LearnerOutcome run_naive(const Instance& inst, const TeachingSet& s,
                         SplitMix64& rng, const GoodPartition* part) {
  check_inputs(inst, s);
  if (part != nullptr) check_partition(inst, *part);

  const Index n = inst.num_concepts();
  LearnerOutcome out;
  out.counts.assign(static_cast<std::size_t>(n), 1);
  std::vector<Index> survivors;
  for (Index c = 0; c < n; ++c) {
    for (const auto& item : s.items) {
      if (!sample_l_consistency(inst, c, item, rng)) {
        out.counts[static_cast<std::size_t>(c)] = 0;
      }
    }
    if (out.counts[static_cast<std::size_t>(c)] == 1) survivors.push_back(c);
  }

  if (survivors.empty()) {
    out.failed = true;
    out.was_good = false;
    return out;
  }
  const Index pick =
      survivors.size() > 1 ? pick_uniform(survivors, rng) : survivors.front();
  out.guessed = pick;
  if (part != nullptr) {
    const std::vector<bool> mask = good_mask(inst, *part);
    out.was_good = mask[static_cast<std::size_t>(pick)];
  }
  return out;
}

MonteCarloEstimate monte_carlo_success(const Instance& inst, const TeachingSet& s,
                                       const GoodPartition& part,
                                       std::uint64_t trials, std::uint64_t seed,
                                       int threads) {
  check_inputs(inst, s);
  check_partition(inst, part);
  if (trials == 0) throw std::invalid_argument("trial count must be positive");

  const auto run_block = [&](std::uint64_t first, std::uint64_t last) -> std::uint64_t {
    std::uint64_t hits = 0;
    for (std::uint64_t t = first; t < last; ++t) {
      SplitMix64 rng(trial_seed(seed, t));
      if (run_prudent(inst, s, part, rng, TieRule::WorstCase).was_good) ++hits;
    }
    return hits;
  };

  const int workers =
      static_cast<int>(std::min<std::uint64_t>(std::max(1, threads), trials));
  std::uint64_t successes = 0;
  if (workers <= 1) {
    successes = run_block(0, trials);
  } else {
    // Per-trial seeding makes the split arbitrary; an integer sum is
    // order-independent, so any partition gives the same totals.
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::uint64_t chunk = trials / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t first = chunk * static_cast<std::uint64_t>(w);
      const std::uint64_t last =
          w + 1 == workers ? trials : first + chunk;
      pool.emplace_back([&partial, &run_block, w, first, last]() {
        partial[static_cast<std::size_t>(w)] = run_block(first, last);
      });
    }
    for (auto& th : pool) th.join();
    for (const auto h : partial) successes += h;
  }

  MonteCarloEstimate est;
  est.trials = trials;
  est.successes = successes;
  est.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  est.std_error =
      std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

}  // namespace pacteach

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pacteach/rng.hpp"
#include "pacteach/types.hpp"

namespace pacteach {

// How a learner settles a tie among the concepts with the most passed
// checks: assume the worst (an unacceptable concept wins the tie
// whenever one is present) or pick uniformly at random.
enum class TieRule { WorstCase, Uniform };

struct LearnerOutcome {
  // Concept the learner commits to; empty only when the naive learner's
  // survivor set is empty.
  std::optional<Index> guessed;
  // Passed consistency checks per concept (prudent learner), or 0/1
  // survival flags (naive learner).
  std::vector<int> counts;
  bool failed = false;
  // Whether the outcome counts as a teaching success under the supplied
  // good/bad split. Under TieRule::WorstCase this requires every tied
  // top-count concept to be good and the top count to be at least 1.
  bool was_good = false;
};

// One Bernoulli consistency check: true with probability
// keep_probability(c, item). Always consumes exactly one draw, so a
// sequence of checks is reproducible from the generator state alone.
bool sample_l_consistency(const Instance& inst, Index c, const LabelledExample& item,
                          SplitMix64& rng);

// One run of the learner that keeps counts: every concept is checked
// against every item -- draws consumed concept-major, item-minor, one
// per (concept, item) pair; that order is part of the interface -- and a
// concept with the highest count is the guess. Under WorstCase the guess
// is a bad top-count concept when one exists; under Uniform one extra
// draw picks uniformly among the tied.
LearnerOutcome run_prudent(const Instance& inst, const TeachingSet& s,
                           const GoodPartition& part, SplitMix64& rng,
                           TieRule tie = TieRule::WorstCase);

// One run of the learner that discards: concepts failing any check are
// dropped, and the guess is uniform over the survivors (one extra draw
// when there are at least two). Draw order and count are identical to
// run_prudent -- all n*k checks are consumed even after a concept is
// already out. Fails when no concept survives. `part` is only used to
// fill was_good; pass nullptr when that flag is not needed.
LearnerOutcome run_naive(const Instance& inst, const TeachingSet& s,
                         SplitMix64& rng, const GoodPartition* part = nullptr);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

// Empirical success rate of worst-case prudent teaching over `trials`
// independent runs. Trial i draws from a SplitMix64 generator seeded
// with trial_seed(seed, i), so results are identical for any thread
// count or trial partition. std_error is the binomial standard error
// sqrt(est * (1 - est) / trials).
MonteCarloEstimate monte_carlo_success(const Instance& inst, const TeachingSet& s,
                                       const GoodPartition& part,
                                       std::uint64_t trials, std::uint64_t seed,
                                       int threads = 1);

}  // namespace pacteach

#pragma once

#include <cstdint>
#include <vector>

#include "pacteach/types.hpp"

namespace pacteach {

enum class Objective { Probable, Approx, Size };

// Caps on an optimizer run. Zero means "no limit". Results produced
// after a cap fired carry budget_exhausted = true and hold the best
// candidate seen so far (best-effort: where the scan was cut off depends
// on scheduling, unlike un-capped results, which are fully
// deterministic).
struct SolveBudget {
  std::uint64_t max_subsets = 0;
  double max_seconds = 0.0;
  int threads = 1;
};

struct SolveResult {
  Objective objective = Objective::Probable;
  SimilarityMode mode = SimilarityMode::Identification;
  TeachingSet teaching_set;
  double achieved_p = 0.0;
  double achieved_q = 0.0;
  // False when the requested success level cannot be met (approx/size
  // objectives). Infeasibility is an answer, not an error: the result
  // then carries the best candidate found, so callers can see how close
  // the instance gets.
  bool feasible = true;
  std::uint64_t subsets_evaluated = 0;
  bool budget_exhausted = false;
  double wall_seconds = 0.0;
};

// Streams all nonempty example subsets of {0..m-1} with size <= k_max in
// canonical order: smaller sizes first, lexicographic within a size.
// This order doubles as the optimizers' tie-break, so "first hit wins"
// and "smallest, lexicographically least maximizer" are the same thing.
// k_max is clamped to m. Throws std::invalid_argument if m < 1 or
// k_max < 1.
class SubsetEnumerator {
 public:
  SubsetEnumerator(Index m, Index k_max);

  // Writes the next subset (ascending indices) into `out`; returns false
  // once the stream is exhausted.
  bool next(std::vector<Index>& out);

 private:
  Index m_;
  Index k_max_;
  Index size_ = 0;  // 0 = before the first subset
  std::vector<Index> current_;
};

// Number of subsets the canonical stream yields: sum_{i=1..min(k_max,m)}
// C(m, i), saturating at UINT64_MAX.
std::uint64_t total_subsets(Index m, Index k_max);

// Maximize success probability over all teaching sets of size <= k,
// under the good/bad split at threshold q. Ties go to the smaller set,
// then to lexicographically smaller indices. With an empty good side
// every set scores 0 and the scan is skipped: the result is the first
// singleton with achieved_p = 0 and subsets_evaluated = 0.
SolveResult probable_optimize(const Instance& inst, double q, Index k,
                              SimilarityMode mode, const SolveBudget& budget = {});

// Find the largest similarity threshold q whose good side can still be
// taught to success level p with at most k examples. Feasibility is
// monotone (raising q only shrinks the good side), so the candidate
// thresholds are bisected; each probe early-stops at the first subset in
// canonical order reaching p, and that subset is the reported witness.
//
// Candidates are the uniform grid {0, 10^-d, ..., 1} by default. With
// exact = true (Identification mode only -- plain similarity takes at
// most n distinct values) the grid is replaced by the values actually
// taken, making the answer exact rather than grid-rounded. If not even
// q = 0 is feasible the result is marked infeasible, carrying the best
// set at the all-good split.
SolveResult approx_optimize(const Instance& inst, double p, Index k, int d,
                            SimilarityMode mode, bool exact = false,
                            const SolveBudget& budget = {});

// Find the smallest teaching set reaching success level p at threshold
// q: first hit in canonical order, so the winner is also
// lexicographically least among minimum-size solutions. When even the
// full example set fails, the result is marked infeasible and carries
// the best set found during the exhaustive scan.
SolveResult size_optimize(const Instance& inst, double q, double p,
                          SimilarityMode mode, const SolveBudget& budget = {});

// Independent check of success_probability: enumerates all 2^(n*k) joint
// pass/fail outcome tables, adds up the probability of those where some
// good concept strictly out-counts every bad one with at least one pass.
// Exponential on purpose; refuses n*k > 20.
double brute_force_success(const Instance& inst, const TeachingSet& s,
                           const GoodPartition& part);

}  // namespace pacteach

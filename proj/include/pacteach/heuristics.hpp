#pragma once

#include <variant>
#include <vector>

#include "pacteach/types.hpp"

namespace pacteach {

// How likely a concept drawn from the class is to pass a consistency
// check on x labelled by the target: (1/n) * sum_c keep_probability of
// (x, target's label). Low values mean x pins the target down -- few
// concepts survive it -- so the greedy criterion sorts ascending. The
// weighted overload replaces the uniform draw by the given distribution
// over concepts (nonnegative, summing to 1 within 1e-9).
double uniqueness(const Instance& inst, Index x);
double uniqueness(const Instance& inst, Index x, const ArrayXd& concept_weights);

// Average noisy similarity to the target among the concepts that agree
// with the target on x (never empty: the target agrees with itself). A
// high value means the survivors of x are close to the target anyway,
// so the greedy criterion sorts descending. Weights are renormalized
// over the agreeing group.
double homogeneity(const Instance& inst, Index x);
double homogeneity(const Instance& inst, Index x, const ArrayXd& concept_weights);

// Blend of the two: (1 - uniqueness) + alpha * homogeneity, descending.
double combined_score(const Instance& inst, Index x, double alpha);

enum class Criterion { Uniqueness, Homogeneity, Combined };

struct HeuristicScore {
  Index example = 0;
  double uniqueness = 0.0;
  double homogeneity = 0.0;
  double combined = 0.0;
};

// Scores for every example, in example order.
std::vector<HeuristicScore> score_all(const Instance& inst, double alpha = 1.0);

// Stop after exactly k examples.
struct StopAtSize {
  Index k = 1;
};

// Stop once the set's success probability under the good/bad split at
// (q, mode) reaches p.
struct StopAtSuccess {
  double p = 0.9;
  double q = 1.0;
  SimilarityMode mode = SimilarityMode::Identification;
};

using StopRule = std::variant<StopAtSize, StopAtSuccess>;

struct GreedyResult {
  TeachingSet teaching_set;
  // False when the rule could not be met even after adding every
  // example; the set then contains all of them.
  bool satisfied = true;
  // Success probability of the final set under the stop rule's split;
  // only meaningful for StopAtSuccess.
  double achieved_p = 0.0;
};

// Ranks examples by the criterion (uniqueness ascending, the others
// descending, ties to the lower example index) and takes them in that
// order until the stop rule fires. Deterministic: same instance and
// arguments, same result.
GreedyResult greedy_teaching_set(const Instance& inst, Criterion criterion,
                                 double alpha, const StopRule& stop);

}  // namespace pacteach

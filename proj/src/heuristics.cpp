#include "pacteach/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pacteach/instance.hpp"
#include "pacteach/probability.hpp"

namespace pacteach {

namespace {

void check_example_index(const Instance& inst, Index x) {
  if (x < 0 || x >= inst.num_examples()) {
    throw std::invalid_argument("example index " + std::to_string(x) +
                                " out of range [0, " +
                                std::to_string(inst.num_examples()) + ")");
  }
}

void check_concept_weights(const Instance& inst, const ArrayXd& w) {
  if (w.size() != inst.num_concepts()) {
    throw std::invalid_argument("concept weight vector has size " +
                                std::to_string(w.size()) + ", expected " +
                                std::to_string(inst.num_concepts()));
  }
  if ((w < 0.0).any()) {
    throw std::invalid_argument("concept weights must be nonnegative");
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("concept weights must sum to 1");
  }
}

double keep_on_target_label(const Instance& inst, Index c, Index x) {
  const double g = inst.gamma(c, x);
  return inst.consistency(c, x) == inst.consistency(inst.target, x) ? 1.0 - g : g;
}

}  // namespace

double uniqueness(const Instance& inst, Index x) {
  check_example_index(inst, x);
  const Index n = inst.num_concepts();
  double total = 0.0;
  for (Index c = 0; c < n; ++c) total += keep_on_target_label(inst, c, x);
  return total / static_cast<double>(n);
}

double uniqueness(const Instance& inst, Index x, const ArrayXd& concept_weights) {
  check_example_index(inst, x);
  check_concept_weights(inst, concept_weights);
  double total = 0.0;
  for (Index c = 0; c < inst.num_concepts(); ++c) {
    total += concept_weights[c] * keep_on_target_label(inst, c, x);
  }
  return total;
}

double homogeneity(const Instance& inst, Index x) {
  check_example_index(inst, x);
  double total = 0.0;
  Index agreeing = 0;
  for (Index c = 0; c < inst.num_concepts(); ++c) {
    if (inst.consistency(c, x) == inst.consistency(inst.target, x)) {
      total += sim_l(inst, c, inst.target);
      ++agreeing;
    }
  }
  return total / static_cast<double>(agreeing);
}

double homogeneity(const Instance& inst, Index x, const ArrayXd& concept_weights) {
  check_example_index(inst, x);
  check_concept_weights(inst, concept_weights);
  double total = 0.0;
  double mass = 0.0;
  for (Index c = 0; c < inst.num_concepts(); ++c) {
    if (inst.consistency(c, x) == inst.consistency(inst.target, x)) {
      total += concept_weights[c] * sim_l(inst, c, inst.target);
      mass += concept_weights[c];
    }
  }
  if (mass <= 0.0) {
    throw std::invalid_argument(
        "concept weights give zero mass to the concepts agreeing on this example");
  }
  return total / mass;
}

double combined_score(const Instance& inst, Index x, double alpha) {
  return (1.0 - uniqueness(inst, x)) + alpha * homogeneity(inst, x);
}

std::vector<HeuristicScore> score_all(const Instance& inst, double alpha) {
  validate_instance(inst);
  std::vector<HeuristicScore> scores;
  scores.reserve(static_cast<std::size_t>(inst.num_examples()));
  for (Index x = 0; x < inst.num_examples(); ++x) {
    HeuristicScore s;
    s.example = x;
    s.uniqueness = uniqueness(inst, x);
    s.homogeneity = homogeneity(inst, x);
    s.combined = (1.0 - s.uniqueness) + alpha * s.homogeneity;
    scores.push_back(s);
  }
  return scores;
}

GreedyResult greedy_teaching_set(const Instance& inst, Criterion criterion,
                                 double alpha, const StopRule& stop) {
  const std::vector<HeuristicScore> scores = score_all(inst, alpha);

  std::vector<Index> order(scores.size());
  std::iota(order.begin(), order.end(), Index{0});
  const auto key = [&](Index x) -> double {
    const auto& s = scores[static_cast<std::size_t>(x)];
    switch (criterion) {
      case Criterion::Uniqueness: return s.uniqueness;     // ascending
      case Criterion::Homogeneity: return -s.homogeneity;  // descending
      case Criterion::Combined: return -s.combined;        // descending
    }
    return 0.0;
  };
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return a < b;  // ties to the lower example index
  });

  GreedyResult result;

  if (const auto* by_size = std::get_if<StopAtSize>(&stop)) {
    if (by_size->k < 1 || by_size->k > inst.num_examples()) {
      throw std::invalid_argument("stop size must lie in [1, m]");
    }
    std::vector<Index> chosen(order.begin(), order.begin() + by_size->k);
    result.teaching_set = make_teaching_set(inst, chosen);
    result.satisfied = true;
    return result;
  }

  const auto& by_success = std::get<StopAtSuccess>(stop);
  if (!(by_success.p > 0.0 && by_success.p <= 1.0)) {
    throw std::invalid_argument("stop success level must lie in (0, 1]");
  }
  const GoodPartition part = good_partition(inst, by_success.q, by_success.mode);
  std::vector<Index> chosen;
  for (const Index x : order) {
    chosen.push_back(x);
    TeachingSet candidate = make_teaching_set(inst, chosen);
    const double p = success_probability(inst, candidate, part);
    if (p >= by_success.p) {
      result.teaching_set = std::move(candidate);
      result.satisfied = true;
      result.achieved_p = p;
      return result;
    }
    if (chosen.size() == static_cast<std::size_t>(inst.num_examples())) {
      result.teaching_set = std::move(candidate);
      result.satisfied = false;
      result.achieved_p = p;
      return result;
    }
  }
  // Unreachable: the loop always returns by the time every example is in.
  throw std::logic_error("greedy selection exhausted examples without a result");
}

}  // namespace pacteach

#include "pacteach/instance.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace pacteach {

namespace {

void check_concept_index(const Instance& inst, Index c, const char* what) {
  if (c < 0 || c >= inst.num_concepts()) {
    throw std::invalid_argument(std::string(what) + " concept index " +
                                std::to_string(c) + " out of range [0, " +
                                std::to_string(inst.num_concepts()) + ")");
  }
}

void check_weights(const Instance& inst, const ArrayXd& w) {
  if (w.size() != inst.num_examples()) {
    throw std::invalid_argument("example weight vector has size " +
                                std::to_string(w.size()) + ", expected " +
                                std::to_string(inst.num_examples()));
  }
  if ((w < 0.0).any()) {
    throw std::invalid_argument("example weights must be nonnegative");
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("example weights must sum to 1");
  }
}

}  // namespace

void validate_instance(const Instance& inst) {
  const Index n = inst.consistency.rows();
  const Index m = inst.consistency.cols();
  if (n <= 0 || m <= 0) {
    throw std::invalid_argument("instance must have at least one concept and one example");
  }
  if (inst.gamma.rows() != n || inst.gamma.cols() != m) {
    throw std::invalid_argument(
        "gamma shape (" + std::to_string(inst.gamma.rows()) + "x" +
        std::to_string(inst.gamma.cols()) + ") does not match consistency shape (" +
        std::to_string(n) + "x" + std::to_string(m) + ")");
  }
  if (static_cast<Index>(inst.concept_ids.size()) != n) {
    throw std::invalid_argument("concept id list does not match concept count");
  }
  if (static_cast<Index>(inst.example_ids.size()) != m) {
    throw std::invalid_argument("example id list does not match example count");
  }
  if (inst.target < 0 || inst.target >= n) {
    throw std::invalid_argument("target index " + std::to_string(inst.target) +
                                " out of range");
  }
  for (Index c = 0; c < n; ++c) {
    for (Index x = 0; x < m; ++x) {
      const int b = inst.consistency(c, x);
      if (b != 0 && b != 1) {
        throw std::invalid_argument("consistency entry for concept '" +
                                    inst.concept_ids[c] + "', example '" +
                                    inst.example_ids[x] + "' is " +
                                    std::to_string(b) + ", expected 0 or 1");
      }
      const double g = inst.gamma(c, x);
      if (!(g >= 0.0 && g <= 1.0)) {
        throw std::invalid_argument("gamma entry for concept '" + inst.concept_ids[c] +
                                    "', example '" + inst.example_ids[x] +
                                    "' is outside [0, 1]");
      }
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : inst.concept_ids) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("duplicate concept id '" + id + "'");
    }
  }
  seen.clear();
  for (const auto& id : inst.example_ids) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("duplicate example id '" + id + "'");
    }
  }
}

TeachingSet make_teaching_set(const Instance& inst, std::vector<Index> examples) {
  if (examples.empty()) {
    throw std::invalid_argument("teaching set must contain at least one example");
  }
  std::sort(examples.begin(), examples.end());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Index x = examples[i];
    if (x < 0 || x >= inst.num_examples()) {
      throw std::invalid_argument("teaching example index " + std::to_string(x) +
                                  " out of range [0, " +
                                  std::to_string(inst.num_examples()) + ")");
    }
    if (i > 0 && examples[i - 1] == x) {
      throw std::invalid_argument("teaching example index " + std::to_string(x) +
                                  " listed twice");
    }
  }
  TeachingSet set;
  set.items.reserve(examples.size());
  for (const Index x : examples) {
    set.items.push_back({x, inst.consistency(inst.target, x)});
  }
  return set;
}

double sim(const Instance& inst, Index c, Index cs) {
  check_concept_index(inst, c, "first");
  check_concept_index(inst, cs, "second");
  const Index agree = (inst.consistency.row(c) == inst.consistency.row(cs)).count();
  return static_cast<double>(agree) / static_cast<double>(inst.num_examples());
}

double sim(const Instance& inst, Index c, Index cs, const ArrayXd& example_weights) {
  check_concept_index(inst, c, "first");
  check_concept_index(inst, cs, "second");
  check_weights(inst, example_weights);
  return ((inst.consistency.row(c) == inst.consistency.row(cs))
              .cast<double>()
              .transpose() *
          example_weights)
      .sum();
}

double sim_l(const Instance& inst, Index c, Index cs) {
  check_concept_index(inst, c, "first");
  check_concept_index(inst, cs, "second");
  const auto agree = inst.consistency.row(c) == inst.consistency.row(cs);
  const auto contrib =
      agree.select(1.0 - inst.gamma.row(c), inst.gamma.row(c));
  return contrib.sum() / static_cast<double>(inst.num_examples());
}

double sim_l(const Instance& inst, Index c, Index cs, const ArrayXd& example_weights) {
  check_concept_index(inst, c, "first");
  check_concept_index(inst, cs, "second");
  check_weights(inst, example_weights);
  const auto agree = inst.consistency.row(c) == inst.consistency.row(cs);
  const auto contrib =
      agree.select(1.0 - inst.gamma.row(c), inst.gamma.row(c));
  return (contrib.transpose() * example_weights).sum();
}

GoodPartition good_partition(const Instance& inst, double q, SimilarityMode mode) {
  validate_instance(inst);
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("similarity threshold q must lie in [0, 1]");
  }
  GoodPartition part;
  part.mode = mode;
  part.q = q;
  for (Index c = 0; c < inst.num_concepts(); ++c) {
    const double s = mode == SimilarityMode::Identification
                         ? sim(inst, c, inst.target)
                         : sim_l(inst, c, inst.target);
    if (s >= q - kThresholdTol) {
      part.good.push_back(c);
    } else {
      part.bad.push_back(c);
    }
  }
  return part;
}

}  // namespace pacteach

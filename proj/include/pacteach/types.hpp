#pragma once

#include <string>
#include <vector>

#include "pacteach/eigen_types.hpp"

namespace pacteach {

// Slack applied to every similarity-threshold comparison, so that
// thresholds sitting exactly on a representable similarity value do not
// flip on the last ulp.
inline constexpr double kThresholdTol = 1e-9;

// How concept/target similarity is measured when splitting the class
// into acceptable ("good") and unacceptable ("bad") concepts.
//  - Identification: plain fraction of examples labelled identically.
//  - Employment: fraction weighted by the concept's own chance of
//    actually passing a consistency check on each example, i.e. how the
//    concept behaves when used, not how it is written down.
enum class SimilarityMode { Identification, Employment };

// One teaching item: an example index together with the label the
// teacher presents for it (always the target concept's label).
struct LabelledExample {
  Index example = 0;
  int label = 0;
};

// A teaching set in canonical form: example indices strictly ascending,
// each labelled by the target concept. Build via make_teaching_set.
struct TeachingSet {
  std::vector<LabelledExample> items;

  Index size() const { return static_cast<Index>(items.size()); }
  bool empty() const { return items.empty(); }
  std::vector<Index> example_indices() const {
    std::vector<Index> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.example);
    return out;
  }
};

// A teaching problem: n concepts evaluated on m examples.
//   consistency(c, x) in {0,1}  -- concept c's label for example x
//   gamma(c, x)      in [0,1]   -- chance a consistency check of c on x
//                                  comes out wrong
// target is the row index of the concept being taught.
struct Instance {
  std::vector<std::string> example_ids;
  std::vector<std::string> concept_ids;
  ArrayXXi consistency;
  ArrayXXd gamma;
  Index target = 0;

  Index num_concepts() const { return consistency.rows(); }
  Index num_examples() const { return consistency.cols(); }
};

// Concept class split against a similarity threshold q: `good` holds the
// concepts whose similarity to the target is >= q - kThresholdTol, `bad`
// the rest. Both lists are ascending; together they cover all concepts.
struct GoodPartition {
  std::vector<Index> good;
  std::vector<Index> bad;
  SimilarityMode mode = SimilarityMode::Identification;
  double q = 1.0;

  Index num_concepts() const {
    return static_cast<Index>(good.size() + bad.size());
  }
};

// Throws std::invalid_argument when shapes, id uniqueness, entry ranges,
// or the target index are off.
void validate_instance(const Instance& inst);

// Canonicalizes `examples` (sorted ascending, duplicates rejected) and
// attaches the target concept's labels. Throws std::invalid_argument on
// out-of-range or repeated indices, or an empty selection.
TeachingSet make_teaching_set(const Instance& inst, std::vector<Index> examples);

}  // namespace pacteach

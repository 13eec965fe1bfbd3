#pragma once

#include "pacteach/types.hpp"

namespace pacteach {

// Fraction of examples on which concepts c and cs assign the same label.
// With no weights this is |{x : c(x) = cs(x)}| / m exactly; the weighted
// overload replaces the uniform 1/m by the supplied distribution over
// examples (must be nonnegative and sum to 1 within 1e-9).
double sim(const Instance& inst, Index c, Index cs);
double sim(const Instance& inst, Index c, Index cs, const ArrayXd& example_weights);

// Expected agreement between c and cs when c is exercised through noisy
// consistency checks: an example where the labels agree contributes
// 1 - gamma(c, x), a disagreeing one contributes gamma(c, x). Note the
// asymmetry: only the first argument's error rates enter, so
// sim_l(a, b) != sim_l(b, a) in general, and sim_l(c, c) < 1 whenever c
// has any nonzero error rate.
double sim_l(const Instance& inst, Index c, Index cs);
double sim_l(const Instance& inst, Index c, Index cs, const ArrayXd& example_weights);

// Splits the class against threshold q under the given similarity mode,
// comparing each concept to the target. The target itself is not given
// special treatment: under Employment it lands in `bad` whenever its own
// error rates drag sim_l(target, target) below q.
GoodPartition good_partition(const Instance& inst, double q, SimilarityMode mode);

}  // namespace pacteach

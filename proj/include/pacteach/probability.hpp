#pragma once

#include "pacteach/types.hpp"

namespace pacteach {

// Count distribution over {0, ..., k}: pmf(j) is the probability that a
// concept passes exactly j of the k consistency checks in a teaching set.
using CountDistribution = ArrayXd;

// Probability that concept c passes a consistency check on one labelled
// item: 1 - gamma(c, x) when the concept's own label matches the
// presented one, gamma(c, x) when it does not (the check then succeeds
// only by erring).
double keep_probability(const Instance& inst, Index c, const LabelledExample& item);

// Distribution of the number of passed checks for concept c over the
// whole set. Independent per-item Bernoulli draws with the
// keep_probability of each item make this a Poisson-binomial
// distribution; computed by the O(k^2) convolution
//
//   pmf'[j] = pmf[j-1] * keep_i + pmf[j] * (1 - keep_i)
//
// folding the items in one at a time. Throws std::invalid_argument on an
// empty set or out-of-range indices.
CountDistribution count_pmf(const Instance& inst, Index c, const TeachingSet& s);

// Probability that teaching with `s` succeeds: some good concept must
// strictly out-count every bad concept AND pass at least one check.
//
//   sum_{i=1..k}  P[max over good counts = i] * P[max over bad counts <= i-1]
//
// Per-concept pmfs are turned into cdfs; a group's max-count cdf is the
// product of its members' cdfs (counts are independent across concepts).
// An empty group contributes the empty product 1, so with no bad
// concepts this degenerates to P[best good count >= 1], and with no good
// concepts to 0. The all-zero-count tie is a failure by construction:
// the sum starts at i = 1. Runs in O(n * k^2).
//
// Throws std::invalid_argument when the partition does not cover exactly
// this instance's concepts or the set is empty.
double success_probability(const Instance& inst, const TeachingSet& s,
                           const GoodPartition& part);

namespace detail {

// Scratch buffers so optimizer scans can evaluate hundreds of thousands
// of candidate sets without touching the allocator.
struct SuccessWorkspace {
  ArrayXd keeps;
  ArrayXd pmf;
  ArrayXXd cdf;      // one row per concept
  ArrayXd good_cdf;  // running products, indexed by count
  ArrayXd bad_cdf;
};

// Core of success_probability: evaluates the items [first, last) given a
// precomputed split into good/bad concept lists. No validation.
double success_probability_ws(const Instance& inst, const Index* items, Index k,
                              const std::vector<Index>& good,
                              const std::vector<Index>& bad, SuccessWorkspace& ws);

}  // namespace detail

}  // namespace pacteach

#include "pacteach/probability.hpp"

#include <stdexcept>

namespace pacteach {

double keep_probability(const Instance& inst, Index c, const LabelledExample& item) {
  if (c < 0 || c >= inst.num_concepts()) {
    throw std::invalid_argument("concept index " + std::to_string(c) + " out of range");
  }
  if (item.example < 0 || item.example >= inst.num_examples()) {
    throw std::invalid_argument("example index " + std::to_string(item.example) +
                                " out of range");
  }
  if (item.label != 0 && item.label != 1) {
    throw std::invalid_argument("item label must be 0 or 1");
  }
  const double g = inst.gamma(c, item.example);
  return inst.consistency(c, item.example) == item.label ? 1.0 - g : g;
}

CountDistribution count_pmf(const Instance& inst, Index c, const TeachingSet& s) {
  if (s.empty()) {
    throw std::invalid_argument("teaching set must contain at least one item");
  }
  const Index k = s.size();
  ArrayXd pmf = ArrayXd::Zero(k + 1);
  pmf[0] = 1.0;
  for (Index i = 0; i < k; ++i) {
    const double keep = keep_probability(inst, c, s.items[static_cast<std::size_t>(i)]);
    // In-place convolution; walk j downwards so pmf[j-1] is still the
    // previous item's value when read.
    for (Index j = i + 1; j >= 1; --j) {
      pmf[j] = pmf[j - 1] * keep + pmf[j] * (1.0 - keep);
    }
    pmf[0] *= 1.0 - keep;
  }
  return pmf;
}

double success_probability(const Instance& inst, const TeachingSet& s,
                           const GoodPartition& part) {
  if (s.empty()) {
    throw std::invalid_argument("teaching set must contain at least one item");
  }
  if (part.num_concepts() != inst.num_concepts()) {
    throw std::invalid_argument(
        "partition covers " + std::to_string(part.num_concepts()) +
        " concepts but the instance has " + std::to_string(inst.num_concepts()));
  }
  for (const Index c : part.good) {
    if (c < 0 || c >= inst.num_concepts()) {
      throw std::invalid_argument("partition references concept index out of range");
    }
  }
  for (const Index c : part.bad) {
    if (c < 0 || c >= inst.num_concepts()) {
      throw std::invalid_argument("partition references concept index out of range");
    }
  }
  for (const auto& item : s.items) {
    if (item.example < 0 || item.example >= inst.num_examples()) {
      throw std::invalid_argument("teaching example index out of range");
    }
    if (item.label != inst.consistency(inst.target, item.example)) {
      throw std::invalid_argument("teaching item label for example '" +
                                  inst.example_ids[item.example] +
                                  "' does not match the target concept");
    }
  }
  const std::vector<Index> idx = s.example_indices();
  detail::SuccessWorkspace ws;
  return detail::success_probability_ws(inst, idx.data(), s.size(), part.good,
                                        part.bad, ws);
}

namespace detail {

double success_probability_ws(const Instance& inst, const Index* items, Index k,
                              const std::vector<Index>& good,
                              const std::vector<Index>& bad, SuccessWorkspace& ws) {
  const Index n = inst.num_concepts();
  const Index t = inst.target;
  if (ws.pmf.size() < k + 1) {
    ws.pmf.resize(k + 1);
    ws.good_cdf.resize(k + 1);
    ws.bad_cdf.resize(k + 1);
  }
  if (ws.cdf.rows() < n || ws.cdf.cols() < k + 1) {
    ws.cdf.resize(n, k + 1);
  }

  // Per-concept count pmf -> cdf. Labels are the target's, so the keep
  // probability of concept c on item x is 1 - gamma(c,x) when c agrees
  // with the target on x and gamma(c,x) otherwise.
  for (Index c = 0; c < n; ++c) {
    auto pmf = ws.pmf.head(k + 1);
    pmf.setZero();
    pmf[0] = 1.0;
    for (Index i = 0; i < k; ++i) {
      const Index x = items[i];
      const double g = inst.gamma(c, x);
      const double keep = inst.consistency(c, x) == inst.consistency(t, x) ? 1.0 - g : g;
      for (Index j = i + 1; j >= 1; --j) {
        pmf[j] = pmf[j - 1] * keep + pmf[j] * (1.0 - keep);
      }
      pmf[0] *= 1.0 - keep;
    }
    double acc = 0.0;
    for (Index j = 0; j <= k; ++j) {
      acc += pmf[j];
      ws.cdf(c, j) = acc;
    }
  }

  // Group max-count cdfs: independent concepts, so P[max <= j] is the
  // product of the members' cdfs. Empty products are 1.
  auto good_cdf = ws.good_cdf.head(k + 1);
  auto bad_cdf = ws.bad_cdf.head(k + 1);
  good_cdf.setOnes();
  bad_cdf.setOnes();
  for (const Index c : good) {
    for (Index j = 0; j <= k; ++j) good_cdf[j] *= ws.cdf(c, j);
  }
  for (const Index c : bad) {
    for (Index j = 0; j <= k; ++j) bad_cdf[j] *= ws.cdf(c, j);
  }

  // Success: the best good count lands exactly on i >= 1 while every bad
  // count stays at or below i - 1.
  double total = 0.0;
  for (Index i = 1; i <= k; ++i) {
    const double good_eq = good_cdf[i] - good_cdf[i - 1];
    total += good_eq * bad_cdf[i - 1];
  }
  return total;
}

}  // namespace detail

}  // namespace pacteach

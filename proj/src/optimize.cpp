#include "pacteach/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "pacteach/instance.hpp"
#include "pacteach/probability.hpp"

namespace pacteach {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kNoRank = std::numeric_limits<std::uint64_t>::max();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// C(n, k) saturating at UINT64_MAX. The running product after step i is
// C(n-k+i, i), an integer, so the stepwise division is exact.
std::uint64_t binom_capped(Index n, Index k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 v = 1;
  for (Index i = 1; i <= k; ++i) {
    v = v * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (v >= static_cast<unsigned __int128>(kNoRank)) return kNoRank;
  }
  return static_cast<std::uint64_t>(v);
}

// Lexicographic successor of an ascending s-combination of {0..m-1}.
bool advance_combination(std::vector<Index>& c, Index m) {
  const Index s = static_cast<Index>(c.size());
  for (Index i = s - 1; i >= 0; --i) {
    if (c[static_cast<std::size_t>(i)] < m - s + i) {
      ++c[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < s; ++j) {
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

// Combination with the given lexicographic rank; lets parallel workers
// jump into the middle of a size's stream.
void unrank_combination(Index m, Index s, std::uint64_t rank, std::vector<Index>& out) {
  out.clear();
  out.reserve(static_cast<std::size_t>(s));
  Index v = 0;
  for (Index i = 0; i < s; ++i) {
    while (true) {
      const std::uint64_t block = binom_capped(m - 1 - v, s - 1 - i);
      if (rank < block) {
        out.push_back(v);
        ++v;
        break;
      }
      rank -= block;
      ++v;
    }
  }
}

void atomic_min(std::atomic<std::uint64_t>& a, std::uint64_t v) {
  std::uint64_t cur = a.load(std::memory_order_relaxed);
  while (v < cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

struct Candidate {
  double p = -1.0;
  std::uint64_t rank = kNoRank;  // canonical rank, global across sizes
  std::vector<Index> set;
};

// b beats a when it scores strictly higher, or ties with an earlier
// canonical rank (i.e. smaller size, then lexicographically smaller).
void merge_best(Candidate& a, const Candidate& b) {
  if (b.rank == kNoRank) return;
  if (b.p > a.p || (b.p == a.p && b.rank < a.rank)) a = b;
}

struct ScanParams {
  const Instance* inst = nullptr;
  const std::vector<Index>* good = nullptr;
  const std::vector<Index>* bad = nullptr;
  Index k_max = 1;
  bool use_threshold = false;
  double threshold = 1.0;
  std::uint64_t max_subsets = 0;
  Clock::time_point deadline = Clock::time_point::max();
  int threads = 1;
};

struct ScanOutput {
  Candidate best;
  Candidate hit;  // first subset reaching the threshold, if any
  std::uint64_t evaluated = 0;
  bool budget_exhausted = false;
};

// Shared per-scan state. `evaluated` counts physical evaluations and
// drives the subset budget; `hit_rank` is the lowest within-size rank of
// a threshold hit so far, letting other workers curtail.
struct ScanState {
  std::atomic<std::uint64_t> evaluated{0};
  std::atomic<bool> exhausted{false};
  std::atomic<std::uint64_t> hit_rank{kNoRank};
  std::atomic<std::uint64_t> next_start{0};
};

// Scans ranks [start, end) of size-s combinations. With `fresh` the
// combination for `start` is unranked; otherwise `combo` must already
// hold it (serial continuation, which keeps working even when C(m, s)
// saturates and unranking would not). Returns false when the scan should
// stop early (budget gone or curtailed by a hit).
bool scan_range(const ScanParams& sp, ScanState& st, Index s,
                std::uint64_t size_offset, std::uint64_t start, std::uint64_t end,
                bool fresh, std::vector<Index>& combo, detail::SuccessWorkspace& ws,
                Candidate& best, Candidate& hit) {
  if (fresh) unrank_combination(sp.inst->num_examples(), s, start, combo);
  for (std::uint64_t r = start; r < end; ++r) {
    if (sp.use_threshold && r > st.hit_rank.load(std::memory_order_relaxed)) {
      return true;  // everything from here on is outranked by a known hit
    }
    const std::uint64_t ev = st.evaluated.fetch_add(1, std::memory_order_relaxed) + 1;
    if (sp.max_subsets != 0 && ev > sp.max_subsets) {
      st.evaluated.fetch_sub(1, std::memory_order_relaxed);
      st.exhausted.store(true, std::memory_order_relaxed);
      return false;
    }
    if ((ev & 255) == 0 && Clock::now() > sp.deadline) {
      st.exhausted.store(true, std::memory_order_relaxed);
      return false;
    }
    const double p = detail::success_probability_ws(*sp.inst, combo.data(), s,
                                                    *sp.good, *sp.bad, ws);
    const std::uint64_t global_rank = size_offset + r;
    if (p > best.p || (p == best.p && global_rank < best.rank)) {
      best.p = p;
      best.rank = global_rank;
      best.set = combo;
    }
    if (sp.use_threshold && p >= sp.threshold) {
      atomic_min(st.hit_rank, r);
      if (r < hit.rank) {
        hit.p = p;
        hit.rank = r;  // within-size; offset applied at merge
        hit.set = combo;
      }
      return true;  // later ranks in this range cannot be the first hit
    }
    // Walking off the end of a block (or the whole stream) is harmless:
    // parallel blocks re-unrank, the serial loop checks bounds first.
    advance_combination(combo, sp.inst->num_examples());
    if (st.exhausted.load(std::memory_order_relaxed)) return false;
  }
  return true;
}

ScanOutput run_scan(const ScanParams& sp) {
  const Index m = sp.inst->num_examples();
  const Index k_max = std::min<Index>(sp.k_max, m);
  const int threads = std::max(1, sp.threads);
  constexpr std::uint64_t kBlock = 4096;

  ScanOutput out;
  ScanState st;
  std::uint64_t size_offset = 0;

  for (Index s = 1; s <= k_max && !st.exhausted.load(); ++s) {
    const std::uint64_t total_s = binom_capped(m, s);
    st.hit_rank.store(kNoRank);
    st.next_start.store(0);

    Candidate size_best;
    Candidate size_hit;

    if (threads > 1 && total_s != kNoRank && total_s >= 2 * kBlock) {
      std::mutex merge_mx;
      auto worker = [&]() {
        std::vector<Index> combo;
        detail::SuccessWorkspace ws;
        Candidate best;
        Candidate hit;
        while (!st.exhausted.load(std::memory_order_relaxed)) {
          const std::uint64_t start = st.next_start.fetch_add(kBlock);
          if (start >= total_s) break;
          if (sp.use_threshold &&
              start > st.hit_rank.load(std::memory_order_relaxed)) {
            break;
          }
          const std::uint64_t end = std::min(start + kBlock, total_s);
          if (!scan_range(sp, st, s, size_offset, start, end, /*fresh=*/true, combo,
                          ws, best, hit)) {
            break;
          }
        }
        std::lock_guard<std::mutex> lk(merge_mx);
        merge_best(size_best, best);
        if (hit.rank < size_hit.rank) size_hit = hit;
      };
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    } else {
      std::vector<Index> combo;
      detail::SuccessWorkspace ws;
      std::uint64_t start = 0;
      bool fresh = true;
      // Serial, but chunked through the same path as the parallel case.
      while (!st.exhausted.load(std::memory_order_relaxed)) {
        if (total_s != kNoRank && start >= total_s) break;
        if (sp.use_threshold && start > st.hit_rank.load(std::memory_order_relaxed)) {
          break;
        }
        std::uint64_t end;
        if (total_s == kNoRank) {
          end = start + kBlock;  // stream on; budget is the only way out
        } else {
          end = std::min(start + kBlock, total_s);
        }
        if (!scan_range(sp, st, s, size_offset, start, end, fresh, combo, ws,
                        size_best, size_hit)) {
          break;
        }
        if (sp.use_threshold && size_hit.rank != kNoRank) break;
        start = end;
        fresh = false;  // combo already advanced to the next rank
      }
    }

    merge_best(out.best, size_best);
    if (sp.use_threshold && size_hit.rank != kNoRank && !st.exhausted.load()) {
      out.hit = size_hit;
      out.hit.rank = size_offset + size_hit.rank;
      // Canonical count: every candidate at or before the winning hit.
      out.evaluated = out.hit.rank + 1;
      return out;
    }

    if (total_s != kNoRank && size_offset <= kNoRank - total_s) {
      size_offset += total_s;
    } else {
      size_offset = kNoRank;
    }
  }

  out.evaluated = st.evaluated.load();
  out.budget_exhausted = st.exhausted.load();
  return out;
}

void check_threshold(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("similarity threshold q must lie in [0, 1]");
  }
}

void check_success_level(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("success level p must lie in (0, 1]");
  }
}

ScanParams make_params(const Instance& inst, const GoodPartition& part, Index k,
                       const SolveBudget& budget, Clock::time_point t0) {
  ScanParams sp;
  sp.inst = &inst;
  sp.good = &part.good;
  sp.bad = &part.bad;
  sp.k_max = k;
  sp.max_subsets = budget.max_subsets;
  sp.threads = budget.threads;
  if (budget.max_seconds > 0.0) {
    sp.deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(budget.max_seconds));
  }
  return sp;
}

// Fallback when a budget fired before anything was evaluated: report the
// first singleton so the result still satisfies achieved_p ==
// success_probability(teaching_set).
Candidate first_singleton(const Instance& inst, const GoodPartition& part) {
  Candidate c;
  c.set = {0};
  c.rank = 0;
  detail::SuccessWorkspace ws;
  const Index x = 0;
  c.p = detail::success_probability_ws(inst, &x, 1, part.good, part.bad, ws);
  return c;
}

}  // namespace

SubsetEnumerator::SubsetEnumerator(Index m, Index k_max)
    : m_(m), k_max_(std::min(k_max, m)) {
  if (m < 1) throw std::invalid_argument("subset enumeration needs at least one example");
  if (k_max < 1) throw std::invalid_argument("maximum subset size must be at least 1");
}

bool SubsetEnumerator::next(std::vector<Index>& out) {
  if (size_ == 0) {
    size_ = 1;
    current_ = {0};
    out = current_;
    return true;
  }
  if (advance_combination(current_, m_)) {
    out = current_;
    return true;
  }
  if (size_ >= k_max_) return false;
  ++size_;
  current_.resize(static_cast<std::size_t>(size_));
  std::iota(current_.begin(), current_.end(), Index{0});
  out = current_;
  return true;
}

std::uint64_t total_subsets(Index m, Index k_max) {
  const Index top = std::min(k_max, m);
  std::uint64_t total = 0;
  for (Index s = 1; s <= top; ++s) {
    const std::uint64_t c = binom_capped(m, s);
    if (c == kNoRank || total > kNoRank - c) return kNoRank;
    total += c;
  }
  return total;
}

SolveResult probable_optimize(const Instance& inst, double q, Index k,
                              SimilarityMode mode, const SolveBudget& budget) {
  validate_instance(inst);
  check_threshold(q);
  if (k < 1) throw std::invalid_argument("teaching set size bound k must be at least 1");

  const auto t0 = Clock::now();
  const GoodPartition part = good_partition(inst, q, mode);

  SolveResult res;
  res.objective = Objective::Probable;
  res.mode = mode;
  res.achieved_q = q;

  if (part.good.empty()) {
    // No subset can succeed; skip the scan and return the canonical
    // degenerate answer.
    res.teaching_set = make_teaching_set(inst, {0});
    res.achieved_p = 0.0;
    res.subsets_evaluated = 0;
    res.wall_seconds = seconds_since(t0);
    return res;
  }

  ScanParams sp = make_params(inst, part, k, budget, t0);
  ScanOutput sc = run_scan(sp);
  if (sc.best.rank == kNoRank) sc.best = first_singleton(inst, part);

  res.teaching_set = make_teaching_set(inst, sc.best.set);
  res.achieved_p = sc.best.p;
  res.subsets_evaluated = sc.evaluated;
  res.budget_exhausted = sc.budget_exhausted;
  res.wall_seconds = seconds_since(t0);
  return res;
}

SolveResult size_optimize(const Instance& inst, double q, double p,
                          SimilarityMode mode, const SolveBudget& budget) {
  validate_instance(inst);
  check_threshold(q);
  check_success_level(p);

  const auto t0 = Clock::now();
  const GoodPartition part = good_partition(inst, q, mode);

  SolveResult res;
  res.objective = Objective::Size;
  res.mode = mode;
  res.achieved_q = q;

  if (part.good.empty()) {
    res.teaching_set = make_teaching_set(inst, {0});
    res.achieved_p = 0.0;
    res.feasible = false;
    res.subsets_evaluated = 0;
    res.wall_seconds = seconds_since(t0);
    return res;
  }

  ScanParams sp = make_params(inst, part, inst.num_examples(), budget, t0);
  sp.use_threshold = true;
  sp.threshold = p;
  ScanOutput sc = run_scan(sp);

  if (sc.hit.rank != kNoRank) {
    res.teaching_set = make_teaching_set(inst, sc.hit.set);
    res.achieved_p = sc.hit.p;
    res.feasible = true;
  } else {
    Candidate best = sc.best;
    if (best.rank == kNoRank) best = first_singleton(inst, part);
    res.teaching_set = make_teaching_set(inst, best.set);
    res.achieved_p = best.p;
    res.feasible = false;
  }
  res.subsets_evaluated = sc.evaluated;
  res.budget_exhausted = sc.budget_exhausted;
  res.wall_seconds = seconds_since(t0);
  return res;
}

SolveResult approx_optimize(const Instance& inst, double p, Index k, int d,
                            SimilarityMode mode, bool exact,
                            const SolveBudget& budget) {
  validate_instance(inst);
  check_success_level(p);
  if (k < 1) throw std::invalid_argument("teaching set size bound k must be at least 1");
  if (d < 1 || d > 12) {
    throw std::invalid_argument("threshold grid resolution d must lie in [1, 12]");
  }
  if (exact && mode != SimilarityMode::Identification) {
    throw std::invalid_argument(
        "exact threshold search is only available in identification mode");
  }

  const auto t0 = Clock::now();

  // Candidate thresholds, ascending. The grid is kept implicit (it can
  // have 10^12 points); exact mode collapses it to the similarity values
  // actually taken.
  std::vector<double> exact_qs;
  std::uint64_t count;
  if (exact) {
    for (Index c = 0; c < inst.num_concepts(); ++c) {
      exact_qs.push_back(sim(inst, c, inst.target));
    }
    std::sort(exact_qs.begin(), exact_qs.end());
    exact_qs.erase(std::unique(exact_qs.begin(), exact_qs.end()), exact_qs.end());
    count = exact_qs.size();
  } else {
    std::uint64_t n = 1;
    for (int i = 0; i < d; ++i) n *= 10;
    count = n + 1;
  }
  const auto candidate = [&](std::uint64_t i) -> double {
    if (exact) return exact_qs[static_cast<std::size_t>(i)];
    return static_cast<double>(i) / static_cast<double>(count - 1);
  };

  SolveResult res;
  res.objective = Objective::Approx;
  res.mode = mode;

  std::uint64_t used = 0;
  bool exhausted = false;
  std::map<double, GoodPartition> partitions;
  const auto partition_at = [&](double q) -> const GoodPartition& {
    auto it = partitions.find(q);
    if (it == partitions.end()) {
      it = partitions.emplace(q, good_partition(inst, q, mode)).first;
    }
    return it->second;
  };

  struct Probe {
    bool feasible = false;
    Candidate hit;
  };
  const auto probe = [&](std::uint64_t idx) -> Probe {
    Probe pr;
    const double q = candidate(idx);
    const GoodPartition& part = partition_at(q);
    if (part.good.empty()) return pr;  // nothing can succeed
    SolveBudget remaining = budget;
    if (budget.max_subsets != 0) {
      if (used >= budget.max_subsets) {
        exhausted = true;
        return pr;
      }
      remaining.max_subsets = budget.max_subsets - used;
    }
    ScanParams sp = make_params(inst, part, k, remaining, t0);
    sp.use_threshold = true;
    sp.threshold = p;
    ScanOutput sc = run_scan(sp);
    used += sc.evaluated;
    if (sc.budget_exhausted) exhausted = true;
    if (sc.hit.rank != kNoRank) {
      pr.feasible = true;
      pr.hit = sc.hit;
    }
    return pr;
  };

  std::uint64_t answer = kNoRank;
  Candidate witness;

  Probe top = probe(count - 1);
  if (top.feasible) {
    answer = count - 1;
    witness = top.hit;
  } else if (!exhausted && count > 1) {
    Probe bottom = probe(0);
    if (bottom.feasible) {
      std::uint64_t lo = 0, hi = count - 1;
      witness = bottom.hit;
      answer = 0;
      while (hi - lo > 1 && !exhausted) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        Probe pr = probe(mid);
        if (pr.feasible) {
          lo = mid;
          answer = mid;
          witness = pr.hit;
        } else {
          hi = mid;
        }
      }
    }
  }

  if (answer != kNoRank) {
    res.achieved_q = candidate(answer);
    res.teaching_set = make_teaching_set(inst, witness.set);
    res.achieved_p = witness.p;
    res.feasible = true;
  } else {
    // Not teachable to level p even with every concept counted as good.
    // Report the best the all-good split can do, at q = 0.
    res.achieved_q = 0.0;
    res.feasible = false;
    const GoodPartition& part = partition_at(exact ? candidate(0) : 0.0);
    SolveBudget remaining = budget;
    if (budget.max_subsets != 0) {
      remaining.max_subsets = used < budget.max_subsets ? budget.max_subsets - used : 1;
    }
    ScanParams sp = make_params(inst, part, k, remaining, t0);
    ScanOutput sc = run_scan(sp);
    used += sc.evaluated;
    if (sc.budget_exhausted) exhausted = true;
    Candidate best = sc.best;
    if (best.rank == kNoRank) best = first_singleton(inst, part);
    res.teaching_set = make_teaching_set(inst, best.set);
    res.achieved_p = best.p;
  }

  res.subsets_evaluated = used;
  res.budget_exhausted = exhausted;
  res.wall_seconds = seconds_since(t0);
  return res;
}

double brute_force_success(const Instance& inst, const TeachingSet& s,
                           const GoodPartition& part) {
  if (s.empty()) {
    throw std::invalid_argument("teaching set must contain at least one item");
  }
  if (part.num_concepts() != inst.num_concepts()) {
    throw std::invalid_argument("partition does not cover this instance's concepts");
  }
  const Index n = inst.num_concepts();
  const Index k = s.size();
  if (n * k > 20) {
    throw std::invalid_argument(
        "outcome enumeration is exponential; refusing n*k > 20 (got " +
        std::to_string(n * k) + ")");
  }
  for (const auto& item : s.items) {
    if (item.example < 0 || item.example >= inst.num_examples()) {
      throw std::invalid_argument("teaching example index out of range");
    }
    if (item.label != inst.consistency(inst.target, item.example)) {
      throw std::invalid_argument("teaching item label does not match the target concept");
    }
  }

  std::vector<bool> is_good(static_cast<std::size_t>(n), false);
  for (const Index c : part.good) is_good[static_cast<std::size_t>(c)] = true;

  // Per-concept probability of each pass/fail pattern over the k items.
  const std::uint32_t patterns = 1u << k;
  std::vector<std::vector<double>> pattern_prob(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    auto& row = pattern_prob[static_cast<std::size_t>(c)];
    row.resize(patterns);
    for (std::uint32_t mask = 0; mask < patterns; ++mask) {
      double prob = 1.0;
      for (Index i = 0; i < k; ++i) {
        const double keep =
            keep_probability(inst, c, s.items[static_cast<std::size_t>(i)]);
        prob *= (mask >> i) & 1u ? keep : 1.0 - keep;
      }
      row[mask] = prob;
    }
  }

  const std::uint64_t tables = 1ull << (n * k);
  const std::uint32_t field = patterns - 1;
  double total = 0.0;
  for (std::uint64_t joint = 0; joint < tables; ++joint) {
    double prob = 1.0;
    int max_good = -1;
    int max_bad = -1;
    for (Index c = 0; c < n; ++c) {
      const std::uint32_t mask =
          static_cast<std::uint32_t>(joint >> (c * k)) & field;
      prob *= pattern_prob[static_cast<std::size_t>(c)][mask];
      const int cnt = std::popcount(mask);
      if (is_good[static_cast<std::size_t>(c)]) {
        max_good = std::max(max_good, cnt);
      } else {
        max_bad = std::max(max_bad, cnt);
      }
    }
    if (max_good >= 1 && max_good > max_bad) total += prob;
  }
  return total;
}

}  // namespace pacteach

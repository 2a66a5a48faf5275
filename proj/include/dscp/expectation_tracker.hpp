#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dscp {

class ExpectationTracker;

// Reported after every recolor step; lets callers audit monotonicity and
// compare against from-scratch recomputation.
struct TrackerStep {
  std::size_t index = 0;  // 0-based count of recolor steps so far
  int color = 0;
  double before = 0.0;
  double after = 0.0;
};
using TrackerObserver = std::function<void(const ExpectationTracker&, const TrackerStep&)>;

// Conditional-expectation bookkeeping for derandomized polychromatic coloring.
//
// Every hyperedge e has a total size |V(e)| and a count |V^d(e)| of vertices
// already recolored, plus the set of colors present among those. Each
// still-uncolored vertex is treated as uniformly random over `num_colors`, so
// the pessimistic estimator of the number of invalid colors is
//
//   E = sum_e sum_{c absent from e} (1 - 1/num_colors)^(|V(e)| - |V^d(e)|).
//
// The state is kept as an integer histogram hist[k] = number of (edge, absent
// color) pairs with exactly k uncolored vertices, so E is a sum of
// non-negative terms and never suffers cancellation.
class ExpectationTracker {
 public:
  // PolyOff mode: per-edge sizes known up front.
  ExpectationTracker(int num_colors, std::vector<std::size_t> edge_sizes);
  // PolyOn mode: every edge is declared to have exactly `uniform_size` vertices.
  ExpectationTracker(int num_colors, std::size_t edge_count, std::size_t uniform_size);

  int num_colors() const { return num_colors_; }
  std::size_t edge_count() const { return remaining_.size(); }
  std::size_t steps() const { return steps_; }

  // Cached estimator value.
  double expectation() const { return cached_; }
  // Direct evaluation from per-edge state, independent of the histogram.
  double recompute_from_scratch() const;

  std::size_t uncolored(std::size_t edge) const { return remaining_[edge]; }
  bool color_present(std::size_t edge, int color) const;

  // Color minimizing the estimator after placing a vertex incident to
  // `edges` (lowest id on ties). Does not modify state.
  int choose(std::span<const std::size_t> edges) const;
  // Commits `color` for a vertex incident to `edges`.
  void apply(std::span<const std::size_t> edges, int color);
  // choose + apply.
  int recolor_argmin(std::span<const std::size_t> edges);

  // Estimator value that apply(edges, color) would produce.
  double expectation_if(std::span<const std::size_t> edges, int color) const;

  void set_observer(TrackerObserver obs) { observer_ = std::move(obs); }

 private:
  double weight(std::size_t k) const { return pow_[k]; }
  std::size_t absent_count(std::size_t edge) const;
  double evaluate(std::span<const std::int64_t> hist) const;

  int num_colors_;
  double keep_prob_;  // 1 - 1/num_colors
  std::size_t words_per_edge_;
  std::vector<std::size_t> remaining_;
  std::vector<std::uint64_t> present_;
  std::vector<double> pow_;  // pow_[k] = keep_prob_^k
  std::vector<std::int64_t> hist_;
  double cached_ = 0.0;
  std::size_t steps_ = 0;
  TrackerObserver observer_;
};

// (1 - 1/l)^k by repeated squaring of the exact base.
double keep_power(int num_colors, std::size_t k);

}  // namespace dscp

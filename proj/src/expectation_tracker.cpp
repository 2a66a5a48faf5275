#include "dscp/expectation_tracker.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace dscp {

double keep_power(int num_colors, std::size_t k) {
  double base = 1.0 - 1.0 / static_cast<double>(num_colors);
  double result = 1.0;
  while (k != 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

ExpectationTracker::ExpectationTracker(int num_colors, std::vector<std::size_t> edge_sizes)
    : num_colors_(num_colors), remaining_(std::move(edge_sizes)) {
  if (num_colors < 1) throw std::invalid_argument("need at least one color");
  keep_prob_ = 1.0 - 1.0 / num_colors;
  words_per_edge_ = (static_cast<std::size_t>(num_colors) + 63) / 64;
  present_.assign(remaining_.size() * words_per_edge_, 0);
  const std::size_t max_size =
      remaining_.empty() ? 0 : *std::max_element(remaining_.begin(), remaining_.end());
  pow_.resize(max_size + 1);
  for (std::size_t k = 0; k <= max_size; ++k) pow_[k] = keep_power(num_colors, k);
  hist_.assign(max_size + 1, 0);
  for (std::size_t u : remaining_) hist_[u] += num_colors;
  cached_ = evaluate(hist_);
}

ExpectationTracker::ExpectationTracker(int num_colors, std::size_t edge_count,
                                       std::size_t uniform_size)
    : ExpectationTracker(num_colors, std::vector<std::size_t>(edge_count, uniform_size)) {}

bool ExpectationTracker::color_present(std::size_t edge, int color) const {
  const std::uint64_t w = present_[edge * words_per_edge_ + (color >> 6)];
  return (w >> (color & 63)) & 1u;
}

std::size_t ExpectationTracker::absent_count(std::size_t edge) const {
  std::size_t present = 0;
  const std::uint64_t* row = present_.data() + edge * words_per_edge_;
  for (std::size_t w = 0; w < words_per_edge_; ++w) present += std::popcount(row[w]);
  return static_cast<std::size_t>(num_colors_) - present;
}

double ExpectationTracker::evaluate(std::span<const std::int64_t> hist) const {
  double total = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    if (hist[k] != 0) total += static_cast<double>(hist[k]) * pow_[k];
  }
  return total;
}

double ExpectationTracker::recompute_from_scratch() const {
  double total = 0.0;
  for (std::size_t e = 0; e < remaining_.size(); ++e) {
    const double term = keep_power(num_colors_, remaining_[e]);
    for (int c = 0; c < num_colors_; ++c) {
      if (!color_present(e, c)) total += term;
    }
  }
  return total;
}

int ExpectationTracker::choose(std::span<const std::size_t> edges) const {
  // E(after c) = E + sum_e A_e (w(u_e - 1) - w(u_e)) - sum_{e : c absent} w(u_e - 1).
  // Only the last sum depends on c, so the argmin maximizes it.
  std::vector<double> gain(num_colors_, 0.0);
  for (std::size_t e : edges) {
    const std::size_t u = remaining_.at(e);
    if (u == 0) {
      throw std::logic_error("edge " + std::to_string(e) + " has no uncolored vertex left");
    }
    const double w = weight(u - 1);
    if (w == 0.0) continue;
    const std::uint64_t* row = present_.data() + e * words_per_edge_;
    for (int c = 0; c < num_colors_; ++c) {
      if (!((row[c >> 6] >> (c & 63)) & 1u)) gain[c] += w;
    }
  }
  int best = 0;
  for (int c = 1; c < num_colors_; ++c) {
    if (gain[c] > gain[best]) best = c;
  }
  return best;
}

double ExpectationTracker::expectation_if(std::span<const std::size_t> edges,
                                          int color) const {
  std::vector<std::int64_t> hist = hist_;
  for (std::size_t e : edges) {
    const std::size_t u = remaining_.at(e);
    if (u == 0) {
      throw std::logic_error("edge " + std::to_string(e) + " has no uncolored vertex left");
    }
    auto absent = static_cast<std::int64_t>(absent_count(e));
    hist[u] -= absent;
    if (!color_present(e, color)) --absent;
    hist[u - 1] += absent;
  }
  return evaluate(hist);
}

void ExpectationTracker::apply(std::span<const std::size_t> edges, int color) {
  if (color < 0 || color >= num_colors_) {
    throw std::out_of_range("color " + std::to_string(color) + " outside palette");
  }
  const double before = cached_;
  for (std::size_t e : edges) {
    const std::size_t u = remaining_.at(e);
    if (u == 0) {
      throw std::logic_error("edge " + std::to_string(e) + " has no uncolored vertex left");
    }
    auto absent = static_cast<std::int64_t>(absent_count(e));
    hist_[u] -= absent;
    std::uint64_t& word = present_[e * words_per_edge_ + (color >> 6)];
    const std::uint64_t bit = std::uint64_t{1} << (color & 63);
    if (!(word & bit)) {
      word |= bit;
      --absent;
    }
    remaining_[e] = u - 1;
    hist_[u - 1] += absent;
  }
  cached_ = evaluate(hist_);
  const TrackerStep step{steps_, color, before, cached_};
  ++steps_;
  if (observer_) observer_(*this, step);
}

int ExpectationTracker::recolor_argmin(std::span<const std::size_t> edges) {
  const int c = choose(edges);
  apply(edges, c);
  return c;
}

}  // namespace dscp

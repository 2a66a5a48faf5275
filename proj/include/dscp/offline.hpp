#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dscp/core.hpp"
#include "dscp/expectation_tracker.hpp"

namespace dscp {

struct AdversaryTranscript;

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactLimits {
  std::size_t max_subsets = 14;
  std::size_t max_elements = 14;
};

struct ExactResult {
  std::size_t opt = 0;
  Allocation witness;  // covers are partitions 0..opt-1, leftovers in partition opt
  std::size_t nodes = 0;
};

// Maximum number of pairwise-disjoint set covers, by exhaustive branch and
// bound over subset-to-group assignments. Refuses instances beyond `limits`.
ExactResult exact_max_disjoint_covers(const SubsetSequence& seq, const Universe& universe,
                                      const ExactLimits& limits = {});

// max(1, floor(fmin / ln(n ln n))), capped at fmin when fmin >= 1.
int default_color_count(std::size_t n, std::size_t fmin);
// The literal ln n divisor variant: max(1, floor(fmin / ln n)), same cap.
int color_count_ln_n(std::size_t n, std::size_t fmin);

struct PolyOffOptions {
  int num_colors = 0;  // 0 -> default_color_count(n, F_min)
  std::uint64_t seed = 0;
  TrackerObserver observer;
};

struct PolyOffResult {
  Coloring coloring;          // after the derandomized recoloring pass
  Coloring phase1;            // the uniformly random Phase-I coloring
  std::size_t phase1_invalid = 0;
  double initial_expectation = 0.0;  // estimator before any recolor
  double final_expectation = 0.0;    // integer-valued once every vertex is fixed
  std::size_t invalid = 0;

  std::size_t valid() const {
    return static_cast<std::size_t>(coloring.num_colors) - invalid;
  }
  Allocation allocation() const;
};

// Offline polychromatic coloring: a uniformly random Phase I followed by a
// recoloring pass v_1, v_2, ... that picks, for each vertex, the color
// minimizing the conditional expected number of invalid colors.
PolyOffResult polyoff(const SubsetSequence& seq, const Universe& universe,
                      const PolyOffOptions& options = {});

// Builds floor(q/2) disjoint set covers for a finished lower-bound game by
// pairing S_com subsets that sit in different (post-split) partitions and
// filling the rest of U from unused singletons of the non-bottleneck supply.
struct PairingResult {
  Allocation allocation;
  std::vector<std::vector<std::size_t>> covers;  // subset indices per cover
};
PairingResult pairing_offline(const AdversaryTranscript& transcript);

}  // namespace dscp

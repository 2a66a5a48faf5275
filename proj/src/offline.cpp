#include "dscp/offline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "dscp/rng.hpp"

namespace dscp {

namespace {

class CoverSearch {
 public:
  CoverSearch(const SubsetSequence& seq, std::size_t n) : m_(seq.size()), n_(n) {
    full_ = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    masks_.reserve(m_);
    for (const Subset& s : seq) {
      std::uint64_t mask = 0;
      for (Element e : s) mask |= std::uint64_t{1} << e;
      masks_.push_back(mask);
    }
    suffix_union_.assign(m_ + 1, 0);
    suffix_freq_.assign((m_ + 1) * n_, 0);
    for (std::size_t j = m_; j-- > 0;) {
      suffix_union_[j] = suffix_union_[j + 1] | masks_[j];
      for (std::size_t i = 0; i < n_; ++i) {
        suffix_freq_[j * n_ + i] =
            suffix_freq_[(j + 1) * n_ + i] + ((masks_[j] >> i) & 1);
      }
    }
    std::size_t fmin = m_;
    for (std::size_t i = 0; i < n_; ++i) fmin = std::min(fmin, suffix_freq_[i]);
    ceiling_ = fmin;
    open_count_.assign(n_, 0);
    group_of_.assign(m_, kGarbage);
    best_group_.assign(m_, kGarbage);
    groups_.reserve(m_);  // descend holds references into groups_
  }

  ExactResult run() {
    if (ceiling_ > 0) descend(0);
    ExactResult r;
    r.opt = best_;
    r.nodes = nodes_;
    r.witness.partition_of.assign(m_, static_cast<PartitionId>(best_));
    for (std::size_t j = 0; j < m_; ++j) {
      if (best_group_[j] >= 0) r.witness.partition_of[j] = best_group_[j];
    }
    return r;
  }

 private:
  static constexpr int kGarbage = -1;

  struct Group {
    std::uint64_t mask = 0;
    bool complete = false;
  };

  std::size_t upper_bound(std::size_t j) const {
    std::size_t bound = m_;
    for (std::size_t i = 0; i < n_; ++i) {
      bound = std::min(bound, open_count_[i] + suffix_freq_[j * n_ + i]);
    }
    return bound;
  }

  void add_open(std::uint64_t mask, int sign) {
    while (mask) {
      open_count_[std::countr_zero(mask)] += sign;
      mask &= mask - 1;
    }
  }

  void record() {
    best_ = completed_;
    // Renumber completed groups 0..best-1 in group order; everything else -1.
    std::vector<int> rank(groups_.size(), -1);
    int next = 0;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (groups_[g].complete) rank[g] = next++;
    }
    best_group_.assign(m_, -1);
    for (std::size_t j = 0; j < m_; ++j) {
      if (group_of_[j] >= 0) best_group_[j] = rank[group_of_[j]];
    }
  }

  void descend(std::size_t j) {
    ++nodes_;
    if (completed_ > best_) record();
    if (best_ == ceiling_ || j == m_) return;
    if (completed_ + upper_bound(j) <= best_) return;

    const std::uint64_t mask = masks_[j];
    const std::uint64_t later = suffix_union_[j + 1];

    // Into an open group; skip groups that could never complete.
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      Group& grp = groups_[g];
      if (grp.complete || (grp.mask | mask | later) != full_) continue;
      const std::uint64_t before = grp.mask;
      const std::uint64_t added = mask & ~before;
      grp.mask |= mask;
      group_of_[j] = static_cast<int>(g);
      if (grp.mask == full_) {
        grp.complete = true;
        ++completed_;
        add_open(before, -1);
        descend(j + 1);
        --completed_;
        grp.complete = false;
        add_open(before, +1);
      } else {
        add_open(added, +1);
        descend(j + 1);
        add_open(added, -1);
      }
      grp.mask = before;
      group_of_[j] = kGarbage;
      if (best_ == ceiling_) return;
    }

    // Open a new group (ids only grow by one, breaking relabeling symmetry).
    if ((mask | later) == full_) {
      groups_.push_back(Group{mask, mask == full_});
      group_of_[j] = static_cast<int>(groups_.size() - 1);
      if (mask == full_) {
        ++completed_;
        descend(j + 1);
        --completed_;
      } else {
        add_open(mask, +1);
        descend(j + 1);
        add_open(mask, -1);
      }
      groups_.pop_back();
      group_of_[j] = kGarbage;
      if (best_ == ceiling_) return;
    }

    descend(j + 1);  // garbage
  }

  std::size_t m_;
  std::size_t n_;
  std::uint64_t full_ = 0;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint64_t> suffix_union_;
  std::vector<std::size_t> suffix_freq_;
  std::vector<std::size_t> open_count_;
  std::vector<Group> groups_;
  std::vector<int> group_of_;
  std::vector<int> best_group_;
  std::size_t completed_ = 0;
  std::size_t best_ = 0;
  std::size_t ceiling_ = 0;
  std::size_t nodes_ = 0;
};

int clamp_colors(double raw, std::size_t fmin) {
  double l = std::floor(raw);
  if (!(l >= 1.0)) l = 1.0;  // also catches NaN and -0
  if (fmin >= 1) l = std::min(l, static_cast<double>(fmin));
  return static_cast<int>(l);
}

}  // namespace

ExactResult exact_max_disjoint_covers(const SubsetSequence& seq, const Universe& universe,
                                      const ExactLimits& limits) {
  const std::size_t max_elements = std::min<std::size_t>(limits.max_elements, 64);
  if (seq.size() > limits.max_subsets || universe.n > max_elements) {
    throw LimitExceeded("exact solver limited to " + std::to_string(limits.max_subsets) +
                        " subsets and " + std::to_string(max_elements) +
                        " elements; instance has " + std::to_string(seq.size()) +
                        " subsets and " + std::to_string(universe.n) + " elements");
  }
  frequencies(seq, universe);  // range check
  return CoverSearch(seq, universe.n).run();
}

int default_color_count(std::size_t n, std::size_t fmin) {
  if (fmin == 0) return 1;
  const double nd = static_cast<double>(n);
  return clamp_colors(static_cast<double>(fmin) / std::log(nd * std::log(nd)), fmin);
}

int color_count_ln_n(std::size_t n, std::size_t fmin) {
  if (fmin == 0) return 1;
  return clamp_colors(static_cast<double>(fmin) / std::log(static_cast<double>(n)), fmin);
}

Allocation PolyOffResult::allocation() const {
  Allocation a;
  a.partition_of.assign(coloring.color_of.begin(), coloring.color_of.end());
  return a;
}

PolyOffResult polyoff(const SubsetSequence& seq, const Universe& universe,
                      const PolyOffOptions& options) {
  const HypergraphView h = build_hypergraph(seq, universe);
  std::size_t fmin = seq.size();
  std::vector<std::size_t> sizes(universe.n);
  for (std::size_t i = 0; i < universe.n; ++i) {
    sizes[i] = h.edges[i].size();
    fmin = std::min(fmin, sizes[i]);
  }
  const int colors =
      options.num_colors > 0 ? options.num_colors : default_color_count(universe.n, fmin);

  PolyOffResult r;
  r.phase1.num_colors = colors;
  r.phase1.color_of.resize(seq.size());
  Engine rng(options.seed);
  for (int& c : r.phase1.color_of) {
    c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(colors)));
  }
  r.phase1_invalid = validate_polychromatic(h, r.phase1).invalid_count;

  ExpectationTracker tracker(colors, std::move(sizes));
  if (options.observer) tracker.set_observer(options.observer);
  r.initial_expectation = tracker.expectation();

  r.coloring.num_colors = colors;
  r.coloring.color_of.resize(seq.size());
  std::vector<std::size_t> incident;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    incident.assign(seq[j].begin(), seq[j].end());
    r.coloring.color_of[j] = tracker.recolor_argmin(incident);
  }
  r.final_expectation = tracker.expectation();
  r.invalid = validate_polychromatic(h, r.coloring).invalid_count;
  return r;
}

}  // namespace dscp

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dscp/element_set.hpp"

namespace dscp {

// Raised for instances that violate the universe bounds or whose parts do not
// line up (allocation length vs. sequence length, ...).
class MalformedInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Universe {
  std::size_t n = 1;

  explicit Universe(std::size_t size);
  bool contains(Element e) const { return e < n; }
};

// A subset of the universe, stored as a sorted list of distinct element ids.
// Sparse storage keeps million-subset adversarial tails (mostly singletons
// over 2^16 elements) affordable; unions go through ElementSet.
class Subset {
 public:
  Subset() = default;
  Subset(std::initializer_list<Element> ids);
  explicit Subset(std::vector<Element> ids);

  static Subset full(const Universe& u);
  static Subset singleton(Element e) { return Subset({e}); }

  std::span<const Element> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Element e) const;
  // Largest id + 1, or 0 when empty.
  std::size_t extent() const { return members_.empty() ? 0 : members_.back() + 1; }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool operator==(const Subset&) const = default;

 private:
  std::vector<Element> members_;
};

using SubsetSequence = std::vector<Subset>;

SubsetSequence concat(SubsetSequence a, const SubsetSequence& b);

struct FrequencyTable {
  std::vector<std::size_t> f;
  std::size_t f_min = 0;
};

using PartitionId = std::int64_t;

// Irrevocable subset -> partition assignment. Partition ids are arbitrary
// non-negative integers; the partitions themselves are the preimages.
struct Allocation {
  std::vector<PartitionId> partition_of;

  std::size_t size() const { return partition_of.size(); }
  // Subset count per partition (d_j).
  std::map<PartitionId, std::size_t> partition_sizes() const;
  // Subset indices grouped by partition, ordered by partition id.
  std::map<PartitionId, std::vector<std::size_t>> groups() const;

  bool operator==(const Allocation&) const = default;
};

// Dual hypergraph: one vertex per subset, one hyperedge per element.
struct HypergraphView {
  std::size_t vertex_count = 0;
  std::vector<std::vector<std::size_t>> edges;  // edges[i] = sorted V(e_i)
};

struct Coloring {
  std::vector<int> color_of;
  int num_colors = 1;
};

struct PolychromaticReport {
  std::size_t invalid_count = 0;
  std::vector<int> invalid_colors;  // ascending

  std::size_t valid_count(int num_colors) const {
    return static_cast<std::size_t>(num_colors) - invalid_count;
  }
};

FrequencyTable frequencies(const SubsetSequence& seq, const Universe& universe);

bool is_set_cover(std::span<const Subset> subsets, const Universe& universe);
bool is_set_cover(std::span<const Subset* const> subsets, const Universe& universe);

// Number of partitions of `alloc` whose union is the whole universe.
std::size_t count_covers(const Allocation& alloc, const SubsetSequence& seq,
                         const Universe& universe);

HypergraphView build_hypergraph(const SubsetSequence& seq, const Universe& universe);

// Streaming form of the shrink transform: caps every element's running
// occurrence count at `fmin`, dropping the element from a subset strictly
// after its fmin-th occurrence. Each output depends only on the prefix seen.
class OnlineShrinker {
 public:
  OnlineShrinker(const Universe& universe, std::size_t fmin);

  Subset push(const Subset& s);

  std::size_t fmin() const { return fmin_; }
  std::span<const std::size_t> counts() const { return counts_; }
  // Elements whose total count stayed below fmin: the declared fmin was wrong.
  std::vector<Element> deficient() const;

 private:
  std::size_t fmin_;
  std::vector<std::size_t> counts_;
};

SubsetSequence shrink_stream(const SubsetSequence& seq, const Universe& universe,
                             std::size_t fmin);

PolychromaticReport validate_polychromatic(const HypergraphView& h, const Coloring& col);

// Inverse of build_hypergraph: subset j holds element i iff j is in edges[i].
SubsetSequence sequence_from_edges(const std::vector<std::vector<std::size_t>>& edges,
                                   std::size_t vertex_count);

std::string to_string(const Subset& s);

}  // namespace dscp

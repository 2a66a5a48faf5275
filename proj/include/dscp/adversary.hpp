#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dscp/core.hpp"
#include "dscp/online.hpp"

namespace dscp {

// Universe {0,1}^q: element i has bit k equal to (i >> k) & 1.
struct BitUniverse {
  unsigned q = 1;

  explicit BitUniverse(unsigned bits);
  std::size_t n() const { return std::size_t{1} << q; }
  Universe universe() const { return Universe(n()); }
  static bool bit(Element i, unsigned k) { return (i >> k) & 1u; }
};

enum class SeparationVariant { kOne = 1, kTwo = 2 };
enum class TailVariant { kSA, kSB };

std::string to_string(TailVariant v);
TailVariant parse_tail_variant(const std::string& s);

// Sequences sharing the prefix [{0,1},{0,2},...,{0,n-1}]: variant 1 pads
// with copies of {0}; variant 2 adds the complements U \ {0,j} and pads with
// copies of {1}. Together they force any algorithm that does not know F_min
// into ratio F_min on one of the two.
SubsetSequence gen_separation(std::size_t n, std::size_t m, SeparationVariant variant);
// Allocation reaching F_min on a separation sequence (1 resp. n - 1 covers).
Allocation separation_witness(std::size_t n, std::size_t m, SeparationVariant variant);

// S_j = { i : bit j of i is 1 }, j = 0..q-1.
SubsetSequence gen_scom(unsigned q);

// One (possibly virtual) partition of the S_com subsets.
struct ScomPart {
  PartitionId source = 0;       // partition id chosen by the online algorithm
  int half = -1;                // -1 = not split, else 0 / 1 for the two halves
  std::vector<unsigned> bits;   // B_j, ascending
  Element bottleneck = 0;       // zeros exactly on B_j
  std::size_t size() const { return bits.size(); }
};

struct SplitRecord {
  PartitionId source = 0;
  std::size_t first = 0;
  std::size_t second = 0;
};

struct ScomStructure {
  unsigned q = 0;
  std::vector<ScomPart> parts;   // ordered by source id, halves adjacent
  std::optional<SplitRecord> split;

  std::vector<std::size_t> sizes() const;
  std::size_t max_size() const;  // L
  // |D_l| for l = 0..L (index 0 unused).
  std::vector<std::size_t> class_counts() const;
  std::vector<Element> bottlenecks() const;
  bool is_bottleneck(Element e) const;
};

// Per-partition bit sets and bottleneck elements for an allocation of the
// q S_com subsets. A partition holding more than ceil(q/2) subsets is split
// into two virtual halves (floor, ceil) with their own bottlenecks.
ScomStructure derive_structure(std::span<const PartitionId> scom_partition, unsigned q);

// The adversarial tail (S_a or S_b) followed by the non-bottleneck singleton
// supply: q copies of each non-bottleneck singleton, ascending element order.
SubsetSequence gen_adversarial_tail(const ScomStructure& s, TailVariant variant);
SubsetSequence gen_singleton_supply(const ScomStructure& s);

// Optimum of the per-allocation online-cover programs.
std::size_t bound_sa(std::span<const std::size_t> sizes, unsigned q);
std::size_t bound_sb(std::span<const std::size_t> sizes, unsigned q);
std::size_t bound_for(TailVariant v, std::span<const std::size_t> sizes, unsigned q);

struct MaxBound {
  std::size_t value = 0;
  std::vector<std::size_t> witness;  // sizes, ascending
};
// Maximum of bound_sa / bound_sb over every multiset of sizes summing to q.
MaxBound max_bound(unsigned q, TailVariant variant);

// Calls fn(parts) for every integer partition of q, parts ascending.
void for_each_integer_partition(unsigned q,
                                const std::function<void(std::span<const std::size_t>)>& fn);

struct AdversaryTranscript {
  unsigned q = 0;
  TailVariant variant = TailVariant::kSB;
  SubsetSequence sequence;      // S_com ^ tail ^ supply
  std::size_t tail_begin = 0;   // index of the first tail subset
  std::size_t supply_begin = 0; // index of the first supply singleton
  Allocation allocation;        // the online algorithm's moves
  ScomStructure structure;
};

struct GameResult {
  std::size_t t_online = 0;
  std::size_t bound = 0;
  std::size_t offline = 0;
  double ratio_lower = 0.0;
  bool split = false;
  bool bound_holds = false;      // t_online <= bound (+1 under a split)
  bool offline_holds = false;    // offline >= floor(q/2)
};

struct Game {
  AdversaryTranscript transcript;
  GameResult result;
};

Game play_game(OnlineAlgorithm& algo, unsigned q, TailVariant variant);

// Transcript file: `# key value` metadata lines followed by the instance.
void write_transcript(std::ostream& out, const AdversaryTranscript& t);

}  // namespace dscp

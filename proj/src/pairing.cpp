#include <algorithm>
#include <deque>

#include "dscp/adversary.hpp"
#include "dscp/offline.hpp"

namespace dscp {

PairingResult pairing_offline(const AdversaryTranscript& t) {
  const ScomStructure& s = t.structure;
  const BitUniverse bu(t.q);
  const std::size_t n = bu.n();
  if (t.sequence.size() < t.supply_begin || t.tail_begin < t.q ||
      t.supply_begin < t.tail_begin) {
    throw MalformedInstance("transcript section offsets are inconsistent");
  }

  // Unused supply singletons per element, in arrival order.
  std::vector<std::vector<std::size_t>> supply(n);
  for (std::size_t j = t.supply_begin; j < t.sequence.size(); ++j) {
    const Subset& single = t.sequence[j];
    if (single.size() != 1 || single.members()[0] >= n) {
      throw MalformedInstance("supply entry " + std::to_string(j) + " is not a singleton");
    }
    supply[single.members()[0]].push_back(j);
  }
  std::vector<std::size_t> next(n, 0);

  // S_com index k is bit position k.
  std::vector<std::deque<unsigned>> classes;
  for (const auto& p : s.parts) classes.emplace_back(p.bits.begin(), p.bits.end());

  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (;;) {
    std::size_t a = classes.size();
    std::size_t b = classes.size();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (classes[c].empty()) continue;
      if (a == classes.size() || classes[c].size() > classes[a].size()) {
        b = a;
        a = c;
      } else if (b == classes.size() || classes[c].size() > classes[b].size()) {
        b = c;
      }
    }
    if (b == classes.size()) break;
    pairs.emplace_back(classes[a].front(), classes[b].front());
    classes[a].pop_front();
    classes[b].pop_front();
  }

  PairingResult r;
  const auto covers = static_cast<PartitionId>(pairs.size());
  r.allocation.partition_of.assign(t.sequence.size(), covers);
  for (std::size_t j = t.supply_begin; j < t.sequence.size(); ++j) {
    r.allocation.partition_of[j] = covers + 1;
  }
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    const auto [x, y] = pairs[c];
    std::vector<std::size_t> members = {x, y};
    // Elements outside S_x u S_y have bit x = bit y = 0; none may be a
    // bottleneck, and each is filled from the singleton supply.
    for (std::size_t e = 0; e < n; ++e) {
      const auto el = static_cast<Element>(e);
      if (BitUniverse::bit(el, x) || BitUniverse::bit(el, y)) continue;
      if (s.is_bottleneck(el)) {
        throw MalformedInstance("bottleneck " + std::to_string(e) + " missing from S_" +
                                std::to_string(x) + " u S_" + std::to_string(y));
      }
      if (next[e] >= supply[e].size()) {
        throw MalformedInstance("singleton supply for element " + std::to_string(e) +
                                " exhausted");
      }
      members.push_back(supply[e][next[e]++]);
    }
    for (std::size_t j : members) r.allocation.partition_of[j] = static_cast<PartitionId>(c);
    r.covers.push_back(std::move(members));
  }
  return r;
}

}  // namespace dscp

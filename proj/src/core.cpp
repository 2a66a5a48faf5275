#include "dscp/core.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace dscp {

Universe::Universe(std::size_t size) : n(size) {
  if (size == 0) throw MalformedInstance("universe must contain at least one element");
}

Subset::Subset(std::initializer_list<Element> ids) : Subset(std::vector<Element>(ids)) {}

Subset::Subset(std::vector<Element> ids) : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Subset Subset::full(const Universe& u) {
  std::vector<Element> ids(u.n);
  for (std::size_t i = 0; i < u.n; ++i) ids[i] = static_cast<Element>(i);
  return Subset(std::move(ids));
}

bool Subset::contains(Element e) const {
  return std::binary_search(members_.begin(), members_.end(), e);
}

SubsetSequence concat(SubsetSequence a, const SubsetSequence& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::map<PartitionId, std::size_t> Allocation::partition_sizes() const {
  std::map<PartitionId, std::size_t> sizes;
  for (PartitionId p : partition_of) ++sizes[p];
  return sizes;
}

std::map<PartitionId, std::vector<std::size_t>> Allocation::groups() const {
  std::map<PartitionId, std::vector<std::size_t>> g;
  for (std::size_t j = 0; j < partition_of.size(); ++j) g[partition_of[j]].push_back(j);
  return g;
}

namespace {

void check_in_range(const Subset& s, const Universe& u, std::size_t index) {
  if (s.extent() > u.n) {
    throw MalformedInstance("subset " + std::to_string(index) + " contains element " +
                            std::to_string(s.extent() - 1) + " outside [0, " +
                            std::to_string(u.n) + ")");
  }
}

}  // namespace

FrequencyTable frequencies(const SubsetSequence& seq, const Universe& universe) {
  FrequencyTable t;
  t.f.assign(universe.n, 0);
  for (std::size_t j = 0; j < seq.size(); ++j) {
    check_in_range(seq[j], universe, j);
    for (Element e : seq[j]) ++t.f[e];
  }
  t.f_min = *std::min_element(t.f.begin(), t.f.end());
  return t;
}

bool is_set_cover(std::span<const Subset> subsets, const Universe& universe) {
  ElementSet acc(universe.n);
  std::size_t covered = 0;
  for (const Subset& s : subsets) {
    for (Element e : s) {
      if (e < universe.n && acc.insert(e)) ++covered;
    }
  }
  return covered == universe.n;
}

bool is_set_cover(std::span<const Subset* const> subsets, const Universe& universe) {
  ElementSet acc(universe.n);
  std::size_t covered = 0;
  for (const Subset* s : subsets) {
    for (Element e : *s) {
      if (e < universe.n && acc.insert(e)) ++covered;
    }
  }
  return covered == universe.n;
}

std::size_t count_covers(const Allocation& alloc, const SubsetSequence& seq,
                         const Universe& universe) {
  if (alloc.size() != seq.size()) {
    throw MalformedInstance("allocation has " + std::to_string(alloc.size()) +
                            " entries for " + std::to_string(seq.size()) + " subsets");
  }
  // A partition whose member total is below n cannot cover; only the rest
  // need a bitset. This keeps allocations with many tiny partitions cheap.
  std::unordered_map<PartitionId, std::size_t> volume;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    check_in_range(seq[j], universe, j);
    if (alloc.partition_of[j] < 0) {
      throw MalformedInstance("negative partition id for subset " + std::to_string(j));
    }
    volume[alloc.partition_of[j]] += seq[j].size();
  }
  std::unordered_map<PartitionId, std::pair<ElementSet, std::size_t>> acc;
  for (const auto& [p, v] : volume) {
    if (v >= universe.n) acc.emplace(p, std::make_pair(ElementSet(universe.n), 0));
  }
  for (std::size_t j = 0; j < seq.size(); ++j) {
    auto it = acc.find(alloc.partition_of[j]);
    if (it == acc.end()) continue;
    auto& [bits, covered] = it->second;
    for (Element e : seq[j]) {
      if (bits.insert(e)) ++covered;
    }
  }
  std::size_t covers = 0;
  for (const auto& [p, entry] : acc) {
    if (entry.second == universe.n) ++covers;
  }
  return covers;
}

HypergraphView build_hypergraph(const SubsetSequence& seq, const Universe& universe) {
  HypergraphView h;
  h.vertex_count = seq.size();
  h.edges.assign(universe.n, {});
  for (std::size_t j = 0; j < seq.size(); ++j) {
    check_in_range(seq[j], universe, j);
    for (Element e : seq[j]) h.edges[e].push_back(j);
  }
  return h;
}

OnlineShrinker::OnlineShrinker(const Universe& universe, std::size_t fmin)
    : fmin_(fmin), counts_(universe.n, 0) {
  if (fmin == 0) throw std::invalid_argument("shrink target fmin must be at least 1");
}

Subset OnlineShrinker::push(const Subset& s) {
  std::vector<Element> kept;
  kept.reserve(s.size());
  for (Element e : s) {
    if (e >= counts_.size()) {
      throw MalformedInstance("element " + std::to_string(e) + " outside universe");
    }
    if (counts_[e] < fmin_) {
      ++counts_[e];
      kept.push_back(e);
    }
  }
  return Subset(std::move(kept));
}

std::vector<Element> OnlineShrinker::deficient() const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < fmin_) out.push_back(static_cast<Element>(i));
  }
  return out;
}

SubsetSequence shrink_stream(const SubsetSequence& seq, const Universe& universe,
                             std::size_t fmin) {
  OnlineShrinker shrinker(universe, fmin);
  SubsetSequence out;
  out.reserve(seq.size());
  for (const Subset& s : seq) out.push_back(shrinker.push(s));
  return out;
}

PolychromaticReport validate_polychromatic(const HypergraphView& h, const Coloring& col) {
  if (col.color_of.size() != h.vertex_count) {
    throw MalformedInstance("coloring covers " + std::to_string(col.color_of.size()) +
                            " vertices, hypergraph has " + std::to_string(h.vertex_count));
  }
  const auto num_colors = static_cast<std::size_t>(col.num_colors);
  std::vector<char> invalid(num_colors, 0);
  std::vector<char> seen(num_colors);
  for (const auto& edge : h.edges) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t v : edge) {
      const int c = col.color_of[v];
      if (c < 0 || static_cast<std::size_t>(c) >= num_colors) {
        throw MalformedInstance("vertex " + std::to_string(v) + " has color " +
                                std::to_string(c) + " outside [0, " +
                                std::to_string(num_colors) + ")");
      }
      seen[c] = 1;
    }
    for (std::size_t c = 0; c < num_colors; ++c) {
      if (!seen[c]) invalid[c] = 1;
    }
  }
  PolychromaticReport r;
  for (std::size_t c = 0; c < num_colors; ++c) {
    if (invalid[c]) r.invalid_colors.push_back(static_cast<int>(c));
  }
  r.invalid_count = r.invalid_colors.size();
  return r;
}

SubsetSequence sequence_from_edges(const std::vector<std::vector<std::size_t>>& edges,
                                   std::size_t vertex_count) {
  std::vector<std::vector<Element>> members(vertex_count);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t v : edges[i]) members.at(v).push_back(static_cast<Element>(i));
  }
  SubsetSequence seq;
  seq.reserve(vertex_count);
  for (auto& m : members) seq.emplace_back(std::move(m));
  return seq;
}

std::string to_string(const Subset& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(s.members()[k]);
  }
  return out + "}";
}

}  // namespace dscp

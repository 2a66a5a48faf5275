#include "dscp/adversary.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "dscp/instance_io.hpp"
#include "dscp/offline.hpp"

namespace dscp {

BitUniverse::BitUniverse(unsigned bits) : q(bits) {
  if (bits < 1 || bits > 24) {
    throw std::invalid_argument("bit universe needs 1 <= q <= 24, got " + std::to_string(bits));
  }
}

std::string to_string(TailVariant v) { return v == TailVariant::kSA ? "sa" : "sb"; }

TailVariant parse_tail_variant(const std::string& s) {
  if (s == "sa" || s == "SA") return TailVariant::kSA;
  if (s == "sb" || s == "SB") return TailVariant::kSB;
  throw std::invalid_argument("unknown tail variant '" + s + "' (expected sa or sb)");
}

SubsetSequence gen_separation(std::size_t n, std::size_t m, SeparationVariant variant) {
  if (n < 2) throw std::invalid_argument("separation sequences need n >= 2");
  const std::size_t needed = variant == SeparationVariant::kOne ? n - 1 : 2 * n - 2;
  if (m < needed) {
    throw std::invalid_argument("m = " + std::to_string(m) + " too small, need at least " +
                                std::to_string(needed));
  }
  SubsetSequence seq;
  seq.reserve(m);
  for (std::size_t j = 1; j < n; ++j) seq.push_back(Subset({0, static_cast<Element>(j)}));
  if (variant == SeparationVariant::kOne) {
    while (seq.size() < m) seq.push_back(Subset({0}));
    return seq;
  }
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<Element> rest;
    for (std::size_t i = 1; i < n; ++i) {
      if (i != j) rest.push_back(static_cast<Element>(i));
    }
    seq.emplace_back(std::move(rest));
  }
  while (seq.size() < m) seq.push_back(Subset({1}));
  return seq;
}

Allocation separation_witness(std::size_t n, std::size_t m, SeparationVariant variant) {
  Allocation a;
  if (variant == SeparationVariant::kOne) {
    a.partition_of.assign(m, 0);
    return a;
  }
  a.partition_of.assign(m, static_cast<PartitionId>(n - 1));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    a.partition_of[j] = static_cast<PartitionId>(j);
    a.partition_of[n - 1 + j] = static_cast<PartitionId>(j);
  }
  return a;
}

SubsetSequence gen_scom(unsigned q) {
  const BitUniverse bu(q);
  SubsetSequence seq;
  for (unsigned k = 0; k < q; ++k) {
    std::vector<Element> ids;
    ids.reserve(bu.n() / 2);
    for (std::size_t i = 0; i < bu.n(); ++i) {
      if (BitUniverse::bit(static_cast<Element>(i), k)) ids.push_back(static_cast<Element>(i));
    }
    seq.emplace_back(std::move(ids));
  }
  return seq;
}

std::vector<std::size_t> ScomStructure::sizes() const {
  std::vector<std::size_t> d;
  for (const auto& p : parts) d.push_back(p.size());
  return d;
}

std::size_t ScomStructure::max_size() const {
  std::size_t l = 0;
  for (const auto& p : parts) l = std::max(l, p.size());
  return l;
}

std::vector<std::size_t> ScomStructure::class_counts() const {
  std::vector<std::size_t> counts(max_size() + 1, 0);
  for (const auto& p : parts) ++counts[p.size()];
  return counts;
}

std::vector<Element> ScomStructure::bottlenecks() const {
  std::vector<Element> b;
  for (const auto& p : parts) b.push_back(p.bottleneck);
  return b;
}

bool ScomStructure::is_bottleneck(Element e) const {
  return std::any_of(parts.begin(), parts.end(),
                     [e](const ScomPart& p) { return p.bottleneck == e; });
}

ScomStructure derive_structure(std::span<const PartitionId> scom_partition, unsigned q) {
  if (scom_partition.size() != q) {
    throw std::invalid_argument("S_com allocation has " + std::to_string(scom_partition.size()) +
                                " entries, expected q = " + std::to_string(q));
  }
  const BitUniverse bu(q);
  const auto all_ones = static_cast<Element>(bu.n() - 1);
  std::map<PartitionId, std::vector<unsigned>> by_source;
  for (unsigned k = 0; k < q; ++k) by_source[scom_partition[k]].push_back(k);

  auto make_part = [&](PartitionId src, int half, std::vector<unsigned> bits) {
    ScomPart p;
    p.source = src;
    p.half = half;
    Element zeros = 0;
    for (unsigned b : bits) zeros |= Element{1} << b;
    p.bottleneck = all_ones & ~zeros;
    p.bits = std::move(bits);
    return p;
  };

  ScomStructure s;
  s.q = q;
  for (auto& [src, bits] : by_source) {
    const std::size_t d = bits.size();
    if (d > (q + 1) / 2) {
      const std::size_t first = d / 2;
      s.split = SplitRecord{src, first, d - first};
      s.parts.push_back(make_part(src, 0, {bits.begin(), bits.begin() + first}));
      s.parts.push_back(make_part(src, 1, {bits.begin() + first, bits.end()}));
    } else {
      s.parts.push_back(make_part(src, -1, std::move(bits)));
    }
  }
  return s;
}

SubsetSequence gen_adversarial_tail(const ScomStructure& s, TailVariant variant) {
  const std::size_t L = s.max_size();
  std::vector<std::vector<Element>> by_class(L + 1);
  for (const auto& p : s.parts) by_class[p.size()].push_back(p.bottleneck);
  SubsetSequence tail;
  if (variant == TailVariant::kSA) {
    for (std::size_t l = 1; l <= L; ++l) {
      if (by_class[l].empty()) continue;
      const Subset sa(by_class[l]);
      for (std::size_t copy = 0; copy < l; ++copy) tail.push_back(sa);
    }
    return tail;
  }
  // S^b_l = union of S^a_r for r >= l, l = 1..L.
  std::vector<Element> acc;
  std::vector<Subset> nested(L + 1);
  for (std::size_t l = L; l >= 1; --l) {
    acc.insert(acc.end(), by_class[l].begin(), by_class[l].end());
    nested[l] = Subset(acc);
  }
  for (std::size_t l = 1; l <= L; ++l) tail.push_back(nested[l]);
  return tail;
}

SubsetSequence gen_singleton_supply(const ScomStructure& s) {
  const BitUniverse bu(s.q);
  std::vector<char> bottleneck(bu.n(), 0);
  for (const auto& p : s.parts) bottleneck[p.bottleneck] = 1;
  SubsetSequence supply;
  supply.reserve((bu.n() - s.parts.size()) * s.q);
  for (std::size_t e = 0; e < bu.n(); ++e) {
    if (bottleneck[e]) continue;
    const Subset single = Subset::singleton(static_cast<Element>(e));
    for (unsigned copy = 0; copy < s.q; ++copy) supply.push_back(single);
  }
  return supply;
}

namespace {

std::vector<std::size_t> class_sizes(std::span<const std::size_t> sizes, unsigned q) {
  std::size_t total = 0;
  std::size_t L = 0;
  for (std::size_t d : sizes) {
    if (d == 0) throw std::invalid_argument("partition sizes must be positive");
    total += d;
    L = std::max(L, d);
  }
  if (total != q) {
    throw std::invalid_argument("partition sizes sum to " + std::to_string(total) +
                                ", expected q = " + std::to_string(q));
  }
  std::vector<std::size_t> counts(L + 1, 0);
  for (std::size_t d : sizes) ++counts[d];
  return counts;
}

}  // namespace

std::size_t bound_sa(std::span<const std::size_t> sizes, unsigned q) {
  const auto counts = class_sizes(sizes, q);
  std::size_t total = 0;
  for (std::size_t l = 1; l < counts.size(); ++l) total += std::min(l, counts[l]);
  return total;
}

std::size_t bound_sb(std::span<const std::size_t> sizes, unsigned q) {
  const auto counts = class_sizes(sizes, q);
  std::size_t used = 0;
  for (std::size_t l = 1; l < counts.size(); ++l) {
    if (used >= l) continue;
    used += std::min(counts[l], l - used);
  }
  return used;
}

std::size_t bound_for(TailVariant v, std::span<const std::size_t> sizes, unsigned q) {
  return v == TailVariant::kSA ? bound_sa(sizes, q) : bound_sb(sizes, q);
}

void for_each_integer_partition(
    unsigned q, const std::function<void(std::span<const std::size_t>)>& fn) {
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t min_part) {
    if (left == 0) {
      fn(parts);
      return;
    }
    for (std::size_t p = min_part; p <= left; ++p) {
      parts.push_back(p);
      rec(left - p, p);
      parts.pop_back();
    }
  };
  rec(q, 1);
}

MaxBound max_bound(unsigned q, TailVariant variant) {
  if (q < 1 || q > 40) throw std::invalid_argument("max_bound supports 1 <= q <= 40");
  MaxBound best;
  for_each_integer_partition(q, [&](std::span<const std::size_t> parts) {
    const std::size_t v = bound_for(variant, parts, q);
    if (v > best.value) {
      best.value = v;
      best.witness.assign(parts.begin(), parts.end());
    }
  });
  return best;
}

Game play_game(OnlineAlgorithm& algo, unsigned q, TailVariant variant) {
  if (q < 2) throw std::invalid_argument("the lower-bound game needs q >= 2");
  const BitUniverse bu(q);
  const Universe universe = bu.universe();

  Game g;
  AdversaryTranscript& t = g.transcript;
  t.q = q;
  t.variant = variant;
  t.sequence = gen_scom(q);

  auto feed = [&](const Subset& s) {
    const PartitionId p = algo.assign(s);
    if (p < 0) {
      throw ProtocolViolation(algo.name() + " returned negative partition id " +
                              std::to_string(p));
    }
    t.allocation.partition_of.push_back(p);
  };

  // The algorithm is told the F_min of the whole game, which is q.
  algo.init(universe, q);
  for (const Subset& s : t.sequence) feed(s);

  t.structure = derive_structure(t.allocation.partition_of, q);
  const SubsetSequence tail = gen_adversarial_tail(t.structure, variant);
  const SubsetSequence supply = gen_singleton_supply(t.structure);
  t.tail_begin = t.sequence.size();
  t.supply_begin = t.tail_begin + tail.size();
  t.sequence.reserve(t.supply_begin + supply.size());
  for (const Subset& s : tail) {
    feed(s);
    t.sequence.push_back(s);
  }
  for (const Subset& s : supply) {
    feed(s);
    t.sequence.push_back(s);
  }
  algo.finish();

  GameResult& r = g.result;
  r.t_online = count_covers(t.allocation, t.sequence, universe);
  r.split = t.structure.split.has_value();
  const auto sizes = t.structure.sizes();
  r.bound = bound_for(variant, sizes, q);
  r.bound_holds = r.t_online <= r.bound + (r.split ? 1 : 0);

  const PairingResult pairing = pairing_offline(t);
  r.offline = count_covers(pairing.allocation, t.sequence, universe);
  r.offline_holds = r.offline >= q / 2;
  r.ratio_lower = static_cast<double>(r.offline) /
                  static_cast<double>(std::max<std::size_t>(r.t_online, 1));
  return g;
}

void write_transcript(std::ostream& out, const AdversaryTranscript& t) {
  out << "# q " << t.q << '\n';
  out << "# variant " << to_string(t.variant) << '\n';
  out << "# tail_begin " << t.tail_begin << '\n';
  out << "# supply_begin " << t.supply_begin << '\n';
  out << "# bottlenecks";
  for (Element b : t.structure.bottlenecks()) out << ' ' << b;
  out << '\n';
  for (const auto& p : t.structure.parts) {
    out << "# part " << p.source << ' ' << p.half << ' ' << p.bottleneck << " bits";
    for (unsigned b : p.bits) out << ' ' << b;
    out << '\n';
  }
  if (t.structure.split) {
    out << "# split " << t.structure.split->source << ' ' << t.structure.split->first << ' '
        << t.structure.split->second << '\n';
  }
  out << "# allocation";
  for (PartitionId p : t.allocation.partition_of) out << ' ' << p;
  out << '\n';
  write_instance(out, Universe(std::size_t{1} << t.q), std::size_t{t.q}, t.sequence);
}

}  // namespace dscp

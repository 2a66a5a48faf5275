// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances are fixed here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dscp/adversary.hpp"
#include "dscp/experiment.hpp"
#include "dscp/expectation_tracker.hpp"
#include "dscp/offline.hpp"
#include "dscp/rng.hpp"
#include "dscp/online.hpp"
#include "oracles.hpp"

using namespace dscp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kScratchRelTol = 1e-9;      // incremental vs from-scratch estimator
constexpr double kMonotoneRelTol = 1e-12;    // float noise allowance on "never increases"
constexpr std::size_t kScratchEvery = 97;    // sample stride for scratch recomputation
constexpr std::size_t kMinScratchSamples = 1000;

// Collects monotonicity and consistency evidence from every tracker that
// suites 1 to 5 create.
struct TrackerAudit {
  std::size_t steps = 0;
  std::size_t increases = 0;
  std::size_t samples = 0;
  double worst_rel = 0.0;

  TrackerObserver observer() {
    return [this](const ExpectationTracker& t, const TrackerStep& s) {
      ++steps;
      if (s.after > s.before * (1 + kMonotoneRelTol)) ++increases;
      if (s.index % kScratchEvery == 0) {
        const double scratch = t.recompute_from_scratch();
        const double rel = std::abs(t.expectation() - scratch) / std::max(1e-300, std::abs(scratch));
        worst_rel = std::max(worst_rel, scratch == 0.0 && t.expectation() == 0.0 ? 0.0 : rel);
        ++samples;
      }
    };
  }
};

TrackerAudit g_audit;

std::unique_ptr<PolyOn> audited_polyon(int colors = 0) {
  auto p = std::make_unique<PolyOn>(colors);
  p->set_observer(g_audit.observer());
  return p;
}

// Covers counted one partition at a time through is_set_cover.
std::size_t verified_covers(const Allocation& a, const SubsetSequence& seq, std::size_t n) {
  std::size_t covers = 0;
  for (const auto& [id, members] : a.groups()) {
    std::vector<const Subset*> parts;
    for (auto j : members) parts.push_back(&seq[j]);
    covers += is_set_cover(std::span<const Subset* const>(parts), Universe(n));
  }
  return covers;
}

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  g_lines.push_back({id, name, pass, detail});
  std::printf("%s criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. PolyOn at n = 16, declared fmin = 12 returns exactly 3 covers.
void polyon_exact_three() {
  int exact = 0;
  double slowest = 0;
  std::size_t worst = 3;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = random_instance(16, 0.2, 60, 12, trial_seed(1001, seed));
    const auto t0 = Clock::now();
    auto p = audited_polyon();
    const auto r = run_online(*p, inst.subsets, Universe(16), 12);
    slowest = std::max(slowest, seconds_since(t0));
    const std::size_t checked = verified_covers(r.allocation, inst.subsets, 16);
    if (p->num_colors() == 3 && r.covers == 3 && checked == 3) {
      ++exact;
    } else {
      worst = std::min(worst, checked);
    }
  }
  const double bound = 16 * 3 * std::pow(2.0 / 3, 12);
  report(1, "PolyOn guarantee at n=16, fmin=12", exact == 100 && slowest < 1.0,
         fmt("%d/100 instances with exactly 3 verified covers (fewest %zu), "
             "n*l*(1-1/l)^fmin = %.3f, slowest %.2f ms",
             exact, worst, bound, slowest * 1e3));
}

// 2. PolyOn covers inside [l - floor(l / ln n), l] over the random grid.
void random_grid_window() {
  const auto t0 = Clock::now();
  int inside = 0;
  int total = 0;
  std::string first_miss;
  std::uint64_t trial = 0;
  for (std::size_t n : {50, 150, 250, 350, 450}) {
    for (std::size_t k : {500, 750, 1000}) {
      for (int t = 0; t < 5; ++t, ++trial) {
        const double p = 0.2;
        const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(k) / p));
        const auto inst = random_instance(n, p, m, k, trial_seed(2002, trial));
        const double ln_n = std::log(static_cast<double>(n));
        const auto l = static_cast<std::size_t>(
            std::floor(static_cast<double>(inst.fmin) / std::log(n * ln_n)));
        const std::size_t lo = l - static_cast<std::size_t>(std::floor(l / ln_n));
        auto algo = audited_polyon();
        const auto r = run_online(*algo, inst.subsets, Universe(n), inst.fmin);
        const std::size_t covers = verified_covers(r.allocation, inst.subsets, n);
        ++total;
        const bool ok = static_cast<std::size_t>(algo->num_colors()) == l && covers == r.covers &&
                        covers >= lo && covers <= l;
        inside += ok;
        if (!ok && first_miss.empty()) {
          first_miss = fmt(" first miss n=%zu k=%zu: %zu not in [%zu, %zu]", n, k, covers, lo, l);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(2, "random-instance cover window", inside == total && secs < 300,
         fmt("%d/%d runs inside [l - floor(l/ln n), l], %.1f s total%s", inside, total, secs,
             first_miss.c_str()));
}

// 3. Two sequences sharing a prefix: no strategy beats ratio F_min on both.
struct PrefixThenGreedy final : OnlineAlgorithm {
  std::size_t prefix;
  bool split;  // true: prefix subsets each alone; false: prefix in one partition
  std::size_t seen = 0;
  GreedyCover tail;
  PrefixThenGreedy(std::size_t len, bool alone) : prefix(len), split(alone) {}
  std::string name() const override { return "prefix"; }
  void init(const Universe& u, std::size_t f) override {
    seen = 0;
    tail.init(u, f);
  }
  PartitionId assign(const Subset& s) override {
    if (seen < prefix) return split ? static_cast<PartitionId>(seen++) : (++seen, 0);
    return static_cast<PartitionId>(prefix) + 1 + tail.assign(s);
  }
};

struct EachAlone final : OnlineAlgorithm {
  PartitionId next = 0;
  std::string name() const override { return "alone"; }
  void init(const Universe&, std::size_t) override { next = 0; }
  PartitionId assign(const Subset&) override { return next++; }
};

void separation_minimax() {
  const std::size_t n = 16;
  const std::size_t m = 64;
  const auto s1 = gen_separation(n, m, SeparationVariant::kOne);
  const auto s2 = gen_separation(n, m, SeparationVariant::kTwo);
  const std::size_t f1 = oracle::fmin(s1, n);
  const std::size_t f2 = oracle::fmin(s2, n);
  const std::size_t w1 =
      verified_covers(separation_witness(n, m, SeparationVariant::kOne), s1, n);
  const std::size_t w2 =
      verified_covers(separation_witness(n, m, SeparationVariant::kTwo), s2, n);
  // A witness reaching F_min certifies the optimum, since no allocation beats F_min.
  const bool optima = f1 == 1 && w1 == 1 && f2 == 15 && w2 == 15;

  struct Strategy {
    std::string name;
    std::function<std::unique_ptr<OnlineAlgorithm>()> make;
  };
  std::vector<Strategy> strategies;
  strategies.push_back({"greedy", [] { return std::make_unique<GreedyCover>(); }});
  for (std::size_t d = 1; d <= 15; ++d) {
    strategies.push_back({"polyon(d=" + std::to_string(d) + ")", [] { return audited_polyon(); }});
  }
  for (std::size_t len = 0; len <= n - 1; ++len) {
    strategies.push_back({"prefix-one-then-greedy(" + std::to_string(len) + ")",
                          [len] { return std::make_unique<PrefixThenGreedy>(len, false); }});
    strategies.push_back({"prefix-alone-then-greedy(" + std::to_string(len) + ")",
                          [len] { return std::make_unique<PrefixThenGreedy>(len, true); }});
  }
  strategies.push_back({"each-alone", [] { return std::make_unique<EachAlone>(); }});

  auto mu = [](std::size_t opt, std::size_t covers) {
    return covers ? static_cast<double>(opt) / static_cast<double>(covers)
                  : std::numeric_limits<double>::infinity();
  };
  bool minimax = true;
  bool greedy_single_prefix_ok = true;
  double weakest = std::numeric_limits<double>::infinity();
  std::string weakest_name;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    // The declared F_min is the strategy's own fixed guess: it cannot depend
    // on which sequence follows the shared prefix.
    const std::size_t declared = i >= 1 && i <= 15 ? i : 1;
    auto a1 = strategies[i].make();
    auto a2 = strategies[i].make();
    const auto r1 = run_online(*a1, s1, Universe(n), declared);
    const auto r2 = run_online(*a2, s2, Universe(n), declared);
    const std::size_t c1 = verified_covers(r1.allocation, s1, n);
    const std::size_t c2 = verified_covers(r2.allocation, s2, n);
    const double worst = std::max(mu(1, c1), mu(15, c2));
    if (worst < weakest) {
      weakest = worst;
      weakest_name = strategies[i].name;
    }
    minimax = minimax && worst >= 15.0;
    if (strategies[i].name.rfind("prefix-one", 0) == 0) {
      greedy_single_prefix_ok = greedy_single_prefix_ok && c2 <= f2;
    }
  }
  report(3, "separation sequences force ratio F_min", optima && minimax && greedy_single_prefix_ok,
         fmt("optima %zu and %zu certified by witnesses; %zu strategies, smallest worst-case "
             "ratio %.1f (%s), required >= 15",
             w1, w2, strategies.size(), weakest, weakest_name.c_str()));
}

// 4. Exact solver against the algorithms and against F_min.
void exact_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4004);
  int ok = 0;
  int brute_agree = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = 1 + rng() % 10;
    const auto seq = oracle::random_sequence(rng, n, m, 0.25 + 0.5 * static_cast<double>(rng() % 3) / 2);
    const Universe u(n);
    const std::size_t fmin = oracle::fmin(seq, n);
    const auto ex = exact_max_disjoint_covers(seq, u);
    bool good = ex.opt <= fmin && verified_covers(ex.witness, seq, n) == ex.opt;

    PolyOffOptions po;
    po.seed = rng();
    po.observer = g_audit.observer();
    const auto off = polyoff(seq, u, po);
    good = good && count_covers(off.allocation(), seq, u) <= ex.opt;
    const std::size_t declared = std::max<std::size_t>(fmin, 1);
    GreedyCover g;
    RandColour rc(rng());
    auto p = audited_polyon();
    for (OnlineAlgorithm* a : std::initializer_list<OnlineAlgorithm*>{&g, &rc, p.get()}) {
      good = good && run_online(*a, seq, u, declared).covers <= ex.opt;
    }
    brute_agree += ex.opt == oracle::brute_force_opt(seq, n);
    ok += good;
  }

  int decomposable = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t k = 1 + rng() % 4;
    SubsetSequence seq;
    for (std::size_t c = 0; c < k; ++c) {
      // A random split of U into up to 3 nonempty blocks is one cover.
      const std::size_t blocks = 1 + rng() % std::min<std::size_t>(3, n);
      std::vector<std::vector<Element>> parts(blocks);
      for (std::size_t b = 0; b < blocks; ++b) parts[b].push_back(static_cast<Element>(b));
      for (std::size_t e = blocks; e < n; ++e) parts[rng() % blocks].push_back(static_cast<Element>(e));
      for (auto& p : parts) seq.emplace_back(std::move(p));
    }
    std::shuffle(seq.begin(), seq.end(), rng);
    const auto ex = exact_max_disjoint_covers(seq, Universe(n));
    decomposable += ex.opt == k && oracle::fmin(seq, n) == k;
  }
  const double secs = seconds_since(t0);
  report(4, "exact solver oracle equivalence",
         ok == 200 && brute_agree == 200 && decomposable == 20 && secs < 120,
         fmt("%d/200 random instances consistent (exact >= every algorithm, <= f_min), "
             "%d/200 equal to set-partition enumeration, %d/20 decomposable reach f_min, %.1f s",
             ok, brute_agree, decomposable, secs));
}

// 5. Lower-bound game for q = 8..16.
void lower_bound_game() {
  int runs = 0;
  int good = 0;
  std::string first_bad;
  double min_ratio = std::numeric_limits<double>::infinity();
  const bool sa14 = max_bound(14, TailVariant::kSA).value == 6 && [] {
    std::size_t best = 0;
    oracle::integer_partitions(14, [&](const std::vector<std::size_t>& d) {
      best = std::max(best, oracle::sa_program(d));
    });
    return best == 6;
  }();
  for (auto variant : {TailVariant::kSB, TailVariant::kSA}) {
    for (unsigned q : {8u, 10u, 12u, 14u, 16u}) {
      const std::size_t mb = max_bound(q, variant).value;
      for (int which = 0; which < 2; ++which) {
        std::unique_ptr<OnlineAlgorithm> algo;
        if (which == 0) {
          algo = std::make_unique<GreedyCover>();
        } else {
          algo = audited_polyon();
        }
        const Game g = play_game(*algo, q, variant);
        const auto& r = g.result;
        const auto pairing = pairing_offline(g.transcript);
        const std::size_t verified =
            verified_covers(pairing.allocation, g.transcript.sequence, std::size_t{1} << q);
        const double need = (q / 2.0) / static_cast<double>(mb + 1);
        const bool ok = r.bound_holds &&
                        r.t_online <= r.bound + (r.split ? 1 : 0) && verified >= q / 2 &&
                        r.offline == verified && r.ratio_lower >= need;
        ++runs;
        good += ok;
        min_ratio = std::min(min_ratio, r.ratio_lower / need);
        if (!ok && first_bad.empty()) {
          first_bad = fmt(" first failure: q=%u %s %s t_online=%zu bound=%zu offline=%zu", q,
                          to_string(variant).c_str(), algo->name().c_str(), r.t_online, r.bound,
                          verified);
        }
      }
    }
  }
  report(5, "lower-bound game", good == runs && sa14,
         fmt("%d/%d games within bound with >= q/2 verified offline covers; "
             "smallest ratio_lower / required = %.2f; max_bound(SA,14)=6 by enumeration: %s%s",
             good, runs, min_ratio, sa14 ? "yes" : "no", first_bad.c_str()));
}

// 6. Bound solvers against exhaustive programs and growth rates.
void bound_solvers() {
  std::size_t checked = 0;
  std::size_t agree = 0;
  for (unsigned q = 1; q <= 12; ++q) {
    oracle::integer_partitions(q, [&](const std::vector<std::size_t>& d) {
      ++checked;
      agree += bound_sb(d, q) == oracle::sb_program(d);
    });
  }
  bool growth = true;
  double lo = 1e9;
  double hi = 0;
  std::string miss;
  for (unsigned q = 4; q <= 40; ++q) {
    const double sa = static_cast<double>(max_bound(q, TailVariant::kSA).value) / std::cbrt(double(q) * q);
    const auto sb = max_bound(q, TailVariant::kSB).value;
    const auto tri = static_cast<std::size_t>(std::floor((std::sqrt(8.0 * q + 1) - 1) / 2));
    lo = std::min(lo, sa);
    hi = std::max(hi, sa);
    if (sa < 0.5 || sa > 2.0 || sb != tri) {
      growth = false;
      if (miss.empty()) miss = fmt(" first miss q=%u", q);
    }
  }
  report(6, "bound solver correctness", agree == checked && growth,
         fmt("greedy SB bound equals exhaustive optimum on %zu/%zu size multisets (q <= 12); "
             "max_bound(SA)/q^(2/3) in [%.3f, %.3f]; max_bound(SB) triangular for q in [4,40]%s",
             agree, checked, lo, hi, miss.c_str()));
}

// 7. Evidence gathered by g_audit during suites 1 to 5.
void tracker_invariants() {
  const bool ok = g_audit.increases == 0 && g_audit.samples >= kMinScratchSamples &&
                  g_audit.worst_rel <= kScratchRelTol;
  report(7, "derandomization invariants", ok,
         fmt("%zu recolor steps, %zu increases; %zu scratch comparisons, worst relative error %.2e "
             "(limit %.0e)",
             g_audit.steps, g_audit.increases, g_audit.samples, g_audit.worst_rel, kScratchRelTol));
}

// 8. Valid colors on a shrunk hypergraph stay valid on the original.
void shrink_preserves_validity() {
  std::mt19937_64 rng(8008);
  int counterexamples = 0;
  int triples = 0;
  std::size_t valid_transfers = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + rng() % 10;
    const std::size_t m = 1 + rng() % 30;
    const auto seq = oracle::random_sequence(rng, n, m, 0.2 + 0.6 * static_cast<double>(rng() % 4) / 3);
    const Universe u(n);
    const auto h = build_hypergraph(seq, u);

    // Alternate arbitrary per-edge vertex deletions with the stream transform.
    std::vector<std::vector<std::size_t>> shrunk_edges;
    if (rep % 2 == 0) {
      for (const auto& e : h.edges) {
        std::vector<std::size_t> kept;
        const std::size_t drop = e.empty() ? 0 : rng() % e.size();
        std::vector<std::size_t> order = e;
        std::shuffle(order.begin(), order.end(), rng);
        kept.assign(order.begin() + static_cast<std::ptrdiff_t>(drop), order.end());
        std::sort(kept.begin(), kept.end());
        shrunk_edges.push_back(std::move(kept));
      }
    } else {
      const std::size_t f = std::max<std::size_t>(1, oracle::fmin(seq, n));
      shrunk_edges = build_hypergraph(shrink_stream(seq, u, f), u).edges;
    }
    const HypergraphView shrunk{h.vertex_count, shrunk_edges};

    const int colors = 1 + static_cast<int>(rng() % 4);
    Coloring col;
    col.num_colors = colors;
    if (rep % 3 == 0) {
      col.color_of.resize(m);
      for (auto& c : col.color_of) c = static_cast<int>(rng() % colors);
    } else {
      PolyOffOptions po;
      po.num_colors = colors;
      po.seed = rng();
      col = polyoff(sequence_from_edges(shrunk_edges, m), u, po).coloring;
    }
    const auto on_shrunk = validate_polychromatic(shrunk, col);
    const auto on_orig = validate_polychromatic(h, col);
    ++triples;
    // Every color invalid on the original must already be invalid on the shrunk view.
    bool subset = std::includes(on_shrunk.invalid_colors.begin(), on_shrunk.invalid_colors.end(),
                                on_orig.invalid_colors.begin(), on_orig.invalid_colors.end());
    subset = subset && on_orig.invalid_count ==
                           oracle::invalid_colors(seq, n, col.color_of, colors);
    counterexamples += !subset;
    valid_transfers += on_shrunk.valid_count(colors);
  }
  report(8, "shrinking preserves validity", counterexamples == 0 && triples == 500,
         fmt("%d triples, %d counterexamples, %zu valid shrunk colors transferred", triples,
             counterexamples, valid_transfers));
}

// 9. Phase-I invalid colors against the first-moment bound.
void phase_one_statistics() {
  const std::size_t n = 64;
  const int l = 8;
  RandomInstance inst;
  std::uint64_t seed = 9009;
  do {
    inst = random_instance(n, 0.2, 240, 48, seed++);
  } while (inst.fmin != 48);
  const int draws = 2000;
  double sum = 0;
  double sum_sq = 0;
  for (int s = 0; s < draws; ++s) {
    PolyOffOptions po;
    po.num_colors = l;
    po.seed = trial_seed(909, static_cast<std::uint64_t>(s));
    const auto r = polyoff(inst.subsets, Universe(n), po);
    const auto x = static_cast<double>(r.phase1_invalid);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double var = (sum_sq - draws * mean * mean) / (draws - 1);
  const double se = std::sqrt(std::max(0.0, var) / draws);
  const double bound = n * l * std::pow(1.0 - 1.0 / l, 48);
  report(9, "Phase-I invalid-color statistics", mean <= bound + 3 * se,
         fmt("mean %.4f over %d colorings, bound %.4f + 3 SE (%.4f) = %.4f", mean, draws, bound,
             3 * se, bound + 3 * se));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  polyon_exact_three();
  random_grid_window();
  separation_minimax();
  exact_oracle();
  lower_bound_game();
  bound_solvers();
  tracker_invariants();
  shrink_preserves_validity();
  phase_one_statistics();
  int failed = 0;
  for (const auto& l : g_lines) failed += !l.pass;
  std::printf("%zu criteria, %d failed, %.1f s\n", g_lines.size(), failed, seconds_since(t0));
  return failed ? 1 : 0;
}

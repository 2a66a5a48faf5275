#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dscp/adversary.hpp"
#include "dscp/experiment.hpp"
#include "dscp/external.hpp"
#include "dscp/instance_io.hpp"
#include "dscp/offline.hpp"
#include "dscp/online.hpp"

namespace {

using namespace dscp;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct OutputSink {
  std::ofstream file;
  std::ostream* out = &std::cout;

  explicit OutputSink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    out = &file;
  }
};

void print_allocation(std::ostream& out, const Allocation& a) {
  out << "allocation";
  for (PartitionId p : a.partition_of) out << ' ' << p;
  out << '\n';
}

std::unique_ptr<OnlineAlgorithm> build_algorithm(const std::string& algo, std::uint64_t seed,
                                                 int colors, const std::string& cmd,
                                                 int timeout_ms) {
  if (algo == "external") {
    if (cmd.empty()) throw CLI::ValidationError("--cmd", "required with --algo external");
    return std::make_unique<ExternalAlgorithm>(cmd, std::chrono::milliseconds(timeout_ms));
  }
  if (algo == "polyon") return std::make_unique<PolyOn>(colors);
  if (algo == "randcolour") return std::make_unique<RandColour>(seed, ColorDivisor::kLnNLnN, colors);
  if (algo == "randcolour-ln") return std::make_unique<RandColour>(seed, ColorDivisor::kLnN, colors);
  return make_algorithm(algo, seed);
}

const std::vector<std::string> kAlgos = {"greedy", "randcolour", "randcolour-ln", "polyon",
                                         "external"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online and offline disjoint set cover toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated instance");
  gen->require_subcommand(1);
  std::string gen_out;

  std::size_t sep_n = 16;
  std::size_t sep_m = 64;
  int sep_variant = 1;
  auto* gen_sep = gen->add_subcommand("separation", "Pair of sequences sharing a prefix, one per variant");
  gen_sep->add_option("-o,--out", gen_out, "Output file (default stdout)");
  gen_sep->add_option("--n", sep_n, "Universe size")->check(CLI::Range(2, 1 << 20));
  gen_sep->add_option("--m", sep_m, "Sequence length");
  gen_sep->add_option("--variant", sep_variant, "1 or 2")->check(CLI::IsMember({1, 2}));

  unsigned scom_q = 4;
  auto* gen_scom_cmd = gen->add_subcommand("scom", "Bit-position subsets over {0,1}^q");
  gen_scom_cmd->add_option("--q", scom_q, "Bits")->check(CLI::Range(1, 24));
  gen_scom_cmd->add_option("-o,--out", gen_out, "Output file (default stdout)");

  std::size_t rnd_n = 100;
  double rnd_p = 0.2;
  std::size_t rnd_m = 0;
  std::size_t rnd_k = 10;
  std::uint64_t rnd_seed = 1;
  auto* gen_rnd = gen->add_subcommand("random", "Random instance with guaranteed minimum frequency");
  gen_rnd->add_option("--n", rnd_n, "Universe size")->check(CLI::PositiveNumber);
  gen_rnd->add_option("--p", rnd_p, "Inclusion probability")->check(CLI::Range(0.0, 1.0));
  gen_rnd->add_option("--m", rnd_m, "Random subsets (default round(k/p))");
  gen_rnd->add_option("--k", rnd_k, "Target minimum frequency")->check(CLI::PositiveNumber);
  gen_rnd->add_option("--seed", rnd_seed, "Seed");
  gen_rnd->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // offline
  auto* off = app.add_subcommand("offline", "Offline solvers");
  off->require_subcommand(1);
  std::string off_path;
  bool off_alloc = false;
  auto* off_exact = off->add_subcommand("exact", "Exact maximum number of disjoint covers");
  std::size_t max_subsets = 14;
  std::size_t max_elements = 14;
  off_exact->add_option("instance", off_path, "Instance file")->required();
  off_exact->add_option("--max-subsets", max_subsets, "Refuse larger sequences")->check(CLI::Range(1, 64));
  off_exact->add_option("--max-elements", max_elements, "Refuse larger universes")->check(CLI::Range(1, 64));
  off_exact->add_flag("--allocation", off_alloc, "Print the witness allocation");
  auto* off_poly = off->add_subcommand("polyoff", "Derandomized polychromatic coloring");
  int off_colors = 0;
  std::uint64_t off_seed = 1;
  off_poly->add_option("instance", off_path, "Instance file")->required();
  off_poly->add_option("--colors", off_colors, "Color count (default from n and F_min)")->check(CLI::NonNegativeNumber);
  off_poly->add_option("--seed", off_seed, "Phase-I seed");
  off_poly->add_flag("--allocation", off_alloc, "Print the coloring");

  // online
  auto* on = app.add_subcommand("online", "Stream an instance through an online algorithm");
  std::string on_path;
  std::string on_algo = "polyon";
  std::optional<std::size_t> on_fmin;
  std::uint64_t on_seed = 1;
  int on_colors = 0;
  std::string on_cmd;
  int timeout_ms = 10000;
  bool on_alloc = false;
  on->add_option("instance", on_path, "Instance file")->required();
  on->add_option("--algo", on_algo, "Algorithm")->check(CLI::IsMember(kAlgos));
  on->add_option("--fmin", on_fmin, "Declared F_min (default: file header, else measured)");
  on->add_option("--seed", on_seed, "Seed for randcolour");
  on->add_option("--colors", on_colors, "Color count override")->check(CLI::NonNegativeNumber);
  on->add_option("--cmd", on_cmd, "Child command for --algo external");
  on->add_option("--timeout-ms", timeout_ms, "Per-move timeout for external children")->check(CLI::PositiveNumber);
  on->add_flag("--allocation", on_alloc, "Print the allocation");

  // adversary
  auto* adv = app.add_subcommand("adversary", "Play the lower-bound game against an algorithm");
  unsigned adv_q = 8;
  std::string adv_variant = "sb";
  std::string adv_algo = "polyon";
  std::string adv_out;
  std::uint64_t adv_seed = 1;
  adv->add_option("--q", adv_q, "Bits (n = 2^q)")->check(CLI::Range(2, 20));
  adv->add_option("--variant", adv_variant, "sa or sb")->check(CLI::IsMember({"sa", "sb"}));
  adv->add_option("--algo", adv_algo, "Algorithm")->check(CLI::IsMember(kAlgos));
  adv->add_option("--seed", adv_seed, "Seed for randcolour");
  adv->add_option("--cmd", on_cmd, "Child command for --algo external");
  adv->add_option("--timeout-ms", timeout_ms, "Per-move timeout for external children")->check(CLI::PositiveNumber);
  adv->add_option("--out", adv_out, "Write the transcript here");

  // bound
  auto* bnd = app.add_subcommand("bound", "Online cover bound for a partition of S_com");
  unsigned bnd_q = 8;
  std::string bnd_variant = "sb";
  std::vector<std::size_t> bnd_sizes;
  bnd->add_option("--q", bnd_q, "Bits")->check(CLI::Range(1, 40));
  bnd->add_option("--variant", bnd_variant, "sa or sb")->check(CLI::IsMember({"sa", "sb"}));
  bnd->add_option("--sizes", bnd_sizes, "Partition sizes d1,d2,... (default: maximize)")->delimiter(',');

  // experiment
  auto* exp = app.add_subcommand("experiment", "Seeded grid of random instances");
  ExperimentConfig cfg;
  std::string exp_format = "csv";
  std::string exp_out;
  exp->add_option("--n", cfg.n_values, "Universe sizes")->delimiter(',');
  exp->add_option("--fmin,--k", cfg.k_values, "Target minimum frequencies")->delimiter(',');
  exp->add_option("--p", cfg.p, "Inclusion probability")->check(CLI::Range(0.0, 1.0));
  exp->add_option("--m", cfg.m, "Random subsets per instance (default round(k/p))");
  exp->add_option("--trials", cfg.trials, "Trials per (n, k) cell")->check(CLI::PositiveNumber);
  exp->add_option("--algos", cfg.algorithms, "Algorithms")->delimiter(',')
      ->check(CLI::IsMember({"greedy", "randcolour", "randcolour-ln", "polyon"}));
  exp->add_option("--seed", cfg.seed, "Master seed");
  exp->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_option("--format", exp_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--out", exp_out, "Output file (default stdout)");
  exp->add_flag("--timing", cfg.timing, "Record wall-clock milliseconds (breaks byte-identity)");

  // serve
  auto* srv = app.add_subcommand("serve", "Run a built-in algorithm as a protocol child on stdio");
  std::string srv_algo = "polyon";
  std::uint64_t srv_seed = 1;
  srv->add_option("--algo", srv_algo, "Algorithm")
      ->check(CLI::IsMember({"greedy", "randcolour", "randcolour-ln", "polyon"}));
  srv->add_option("--seed", srv_seed, "Seed for randcolour");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      OutputSink sink(gen_out);
      if (*gen_sep) {
        const auto v = sep_variant == 1 ? SeparationVariant::kOne : SeparationVariant::kTwo;
        const auto seq = gen_separation(sep_n, sep_m, v);
        const Universe u(sep_n);
        write_instance(*sink.out, u, frequencies(seq, u).f_min, seq);
      } else if (*gen_scom_cmd) {
        const auto seq = gen_scom(scom_q);
        write_instance(*sink.out, Universe(std::size_t{1} << scom_q), std::nullopt, seq);
      } else {
        if (rnd_p <= 0.0) throw std::invalid_argument("--p must be > 0");
        const std::size_t m =
            rnd_m ? rnd_m : static_cast<std::size_t>(std::llround(static_cast<double>(rnd_k) / rnd_p));
        const auto inst = random_instance(rnd_n, rnd_p, m, rnd_k, rnd_seed);
        write_instance(*sink.out, Universe(rnd_n), inst.fmin, inst.subsets);
      }
      return kOk;
    }

    if (*off) {
      const Instance inst = read_instance_file(off_path);
      const FrequencyTable freq = frequencies(inst.subsets, inst.universe);
      std::cout << "n " << inst.universe.n << "\nm " << inst.subsets.size() << "\nfmin "
                << freq.f_min << '\n';
      if (*off_exact) {
        const auto r = exact_max_disjoint_covers(inst.subsets, inst.universe,
                                                 ExactLimits{max_subsets, max_elements});
        std::cout << "opt " << r.opt << "\nnodes " << r.nodes << '\n';
        if (off_alloc) print_allocation(std::cout, r.witness);
      } else {
        PolyOffOptions opts;
        opts.num_colors = off_colors;
        opts.seed = off_seed;
        const auto r = polyoff(inst.subsets, inst.universe, opts);
        const Allocation a = r.allocation();
        std::cout << "colors " << r.coloring.num_colors << "\nphase1_invalid " << r.phase1_invalid
                  << "\ninitial_expectation " << r.initial_expectation << "\ninvalid "
                  << r.invalid << "\ncovers " << count_covers(a, inst.subsets, inst.universe)
                  << '\n';
        if (off_alloc) print_allocation(std::cout, a);
      }
      return kOk;
    }

    if (*on) {
      const Instance inst = read_instance_file(on_path);
      const std::size_t fmin =
          on_fmin ? *on_fmin
                  : inst.fmin ? *inst.fmin : frequencies(inst.subsets, inst.universe).f_min;
      auto algo = build_algorithm(on_algo, on_seed, on_colors, on_cmd, timeout_ms);
      std::cout << "algo " << on_algo << "\nn " << inst.universe.n << "\nm "
                << inst.subsets.size() << "\nfmin " << fmin << '\n';
      try {
        const auto r = run_online(*algo, inst.subsets, inst.universe, fmin);
        std::cout << "covers " << r.covers << '\n';
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
        if (on_alloc) print_allocation(std::cout, r.allocation);
      } catch (const ProtocolViolation& e) {
        std::cout << "covers 0\n";
        std::cerr << "protocol violation: " << e.what() << '\n';
        return kViolation;
      }
      return kOk;
    }

    if (*adv) {
      auto algo = build_algorithm(adv_algo, adv_seed, 0, on_cmd, timeout_ms);
      const TailVariant variant = parse_tail_variant(adv_variant);
      Game g;
      try {
        g = play_game(*algo, adv_q, variant);
      } catch (const ProtocolViolation& e) {
        std::cout << "t_online 0\n";
        std::cerr << "protocol violation: " << e.what() << '\n';
        return kViolation;
      }
      const GameResult& r = g.result;
      std::cout << "q " << adv_q << "\nvariant " << adv_variant << "\nalgo " << adv_algo
                << "\nsizes";
      for (std::size_t d : g.transcript.structure.sizes()) std::cout << ' ' << d;
      std::cout << "\nsplit " << (r.split ? 1 : 0) << "\nt_online " << r.t_online << "\nbound "
                << r.bound << "\nbound_holds " << (r.bound_holds ? 1 : 0) << "\noffline "
                << r.offline << "\noffline_holds " << (r.offline_holds ? 1 : 0)
                << "\nratio_lower " << r.ratio_lower << '\n';
      if (!r.bound_holds) std::cerr << "warning: online cover count exceeds the game bound\n";
      if (!adv_out.empty()) {
        std::ofstream f(adv_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + adv_out);
        write_transcript(f, g.transcript);
      }
      return kOk;
    }

    if (*bnd) {
      const TailVariant variant = parse_tail_variant(bnd_variant);
      if (!bnd_sizes.empty()) {
        std::cout << "bound " << bound_for(variant, bnd_sizes, bnd_q) << '\n';
      } else {
        const MaxBound mb = max_bound(bnd_q, variant);
        std::cout << "max_bound " << mb.value << "\nwitness";
        for (std::size_t d : mb.witness) std::cout << ' ' << d;
        std::cout << '\n';
      }
      return kOk;
    }

    if (*exp) {
      const auto records = run_experiment(cfg);
      const ResultFormat fmt = parse_result_format(exp_format);
      if (exp_out.empty() || exp_out == "-") {
        emit_results(std::cout, records, fmt);
      } else {
        emit_results(std::filesystem::path(exp_out), records, fmt);
      }
      return kOk;
    }

    if (*srv) {
      auto algo = build_algorithm(srv_algo, srv_seed, 0, "", timeout_ms);
      return serve_protocol(*algo, std::cin, std::cout);
    }
  } catch (const ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

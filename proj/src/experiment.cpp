#include "dscp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "dscp/offline.hpp"
#include "dscp/online.hpp"
#include "dscp/rng.hpp"

namespace dscp {

RandomInstance random_instance(std::size_t n, double p, std::size_t m, std::size_t k,
                               std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_instance needs n >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("random_instance needs 0 < p <= 1");
  if (k == 0) throw std::invalid_argument("random_instance needs k >= 1");

  Engine rng(seed);
  RandomInstance r;
  std::vector<std::size_t> freq(n, 0);
  r.subsets.reserve(m);
  std::vector<Element> ids;
  for (std::size_t j = 0; j < m; ++j) {
    ids.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (bernoulli(rng, p)) {
        ids.push_back(static_cast<Element>(i));
        ++freq[i];
      }
    }
    r.subsets.emplace_back(ids);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (; freq[i] < k; ++freq[i]) r.subsets.push_back(Subset::singleton(static_cast<Element>(i)));
  }
  r.fmin = *std::min_element(freq.begin(), freq.end());
  return r;
}

ResultFormat parse_result_format(const std::string& s) {
  if (s == "csv") return ResultFormat::kCsv;
  if (s == "json") return ResultFormat::kJson;
  throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

void ExperimentConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (n_values.empty() || k_values.empty()) throw std::invalid_argument("empty n or k grid");
  for (std::size_t n : n_values) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
  }
  for (std::size_t k : k_values) {
    if (k == 0) throw std::invalid_argument("target fmin must be >= 1");
  }
  if (algorithms.empty()) throw std::invalid_argument("no algorithms given");
  for (const auto& a : algorithms) make_algorithm(a, 0);
}

bool exact_upper_bound_applies(std::size_t n, std::size_t m) {
  const ExactLimits limits;
  return n <= limits.max_elements && m <= limits.max_subsets;
}

namespace {

struct TrialSpec {
  std::size_t n = 0;
  std::size_t k = 0;
};

std::vector<ExperimentRecord> run_trial(const ExperimentConfig& cfg, std::size_t trial,
                                        const TrialSpec& spec) {
  const std::uint64_t seed = trial_seed(cfg.seed, trial);
  const std::size_t m =
      cfg.m ? cfg.m : static_cast<std::size_t>(std::llround(static_cast<double>(spec.k) / cfg.p));
  const RandomInstance inst = random_instance(spec.n, cfg.p, m, spec.k, seed);
  const Universe universe(spec.n);

  std::size_t upper = inst.fmin;
  if (exact_upper_bound_applies(spec.n, inst.subsets.size())) {
    upper = exact_max_disjoint_covers(inst.subsets, universe).opt;
  }

  std::vector<ExperimentRecord> out;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    auto algo = make_algorithm(cfg.algorithms[a], trial_seed(seed, a + 1));
    const auto t0 = std::chrono::steady_clock::now();
    const OnlineRunResult run = run_online(*algo, inst.subsets, universe, inst.fmin);
    const auto t1 = std::chrono::steady_clock::now();

    ExperimentRecord rec;
    rec.trial = trial;
    rec.n = spec.n;
    rec.m = inst.subsets.size();
    rec.fmin = inst.fmin;
    rec.algo = cfg.algorithms[a];
    rec.covers = run.covers;
    rec.upper_bound = upper;
    rec.ratio_lower = run.covers ? static_cast<double>(upper) / static_cast<double>(run.covers)
                                 : std::numeric_limits<double>::infinity();
    rec.seed = seed;
    if (cfg.timing) rec.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialSpec> specs;
  for (std::size_t n : cfg.n_values) {
    for (std::size_t k : cfg.k_values) {
      for (std::size_t t = 0; t < cfg.trials; ++t) specs.push_back({n, k});
    }
  }

  std::vector<std::vector<ExperimentRecord>> per_trial(specs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t t; !failed && (t = next++) < specs.size();) {
      try {
        per_trial[t] = run_trial(cfg, t, specs[t]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, specs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRecord> records;
  for (auto& v : per_trial) {
    for (auto& r : v) records.push_back(std::move(r));
  }
  return records;
}

}  // namespace dscp

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dscp/core.hpp"

namespace dscp {

struct RandomInstance {
  SubsetSequence subsets;
  std::size_t fmin = 0;  // min_i F_i of the final sequence, always >= k
};

// m subsets with each element included independently with probability p,
// then singletons {i} appended (element by element, ascending) until every
// F_i >= k.
RandomInstance random_instance(std::size_t n, double p, std::size_t m, std::size_t k,
                               std::uint64_t seed);

enum class ResultFormat { kCsv, kJson };
ResultFormat parse_result_format(const std::string& s);

struct ExperimentConfig {
  std::vector<std::size_t> n_values{100};
  std::vector<std::size_t> k_values{1000};  // target fmin per instance
  double p = 0.2;
  std::size_t m = 0;                        // 0 -> round(k / p)
  std::size_t trials = 1;                   // per (n, k) cell
  std::vector<std::string> algorithms{"polyon"};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool timing = false;                      // off -> millis = 0, output byte-stable

  void validate() const;
};

struct ExperimentRecord {
  std::size_t trial = 0;
  std::size_t n = 0;
  std::size_t m = 0;           // length of the generated sequence
  std::size_t fmin = 0;
  std::string algo;
  std::size_t covers = 0;
  std::size_t upper_bound = 0; // exact optimum when small enough, else fmin
  double ratio_lower = 0.0;    // upper_bound / covers; +inf when covers = 0
  std::uint64_t seed = 0;
  double millis = 0.0;

  bool operator==(const ExperimentRecord&) const = default;
};

// Instances small enough for the exact solver to supply upper_bound.
bool exact_upper_bound_applies(std::size_t n, std::size_t m);

// Trial t (numbered across the n-major, k-minor grid) uses seed
// trial_seed(cfg.seed, t). Records are ordered by trial, then by the order of
// cfg.algorithms, whatever the thread count.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

extern const char* const kCsvHeader;

// Throws std::logic_error if a record has covers > upper_bound.
void emit_results(std::ostream& out, const std::vector<ExperimentRecord>& records,
                  ResultFormat format);
void emit_results(const std::filesystem::path& path,
                  const std::vector<ExperimentRecord>& records, ResultFormat format);
std::vector<ExperimentRecord> parse_results(std::istream& in, ResultFormat format);

}  // namespace dscp

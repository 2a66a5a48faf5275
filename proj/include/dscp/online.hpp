#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dscp/core.hpp"
#include "dscp/expectation_tracker.hpp"

namespace dscp {

class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Online DSCP contract: the algorithm learns U and F_min before the first
// arrival, then assigns each subset to a partition as it arrives. An
// assignment can never be revised, and must not depend on later subsets.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual void init(const Universe& universe, std::size_t fmin) = 0;
  virtual PartitionId assign(const Subset& subset) = 0;
  // Called once after the last arrival; returns audit warnings, if any.
  virtual std::vector<std::string> finish() { return {}; }
};

// Fills partition i until its union is U, then moves on to i + 1.
class GreedyCover final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "greedy"; }
  void init(const Universe& universe, std::size_t fmin) override;
  PartitionId assign(const Subset& subset) override;

 private:
  std::size_t n_ = 0;
  PartitionId current_ = 0;
  ElementSet covered_;
  std::size_t covered_count_ = 0;
};

enum class ColorDivisor { kLnNLnN, kLnN };

// Colors each arriving subset uniformly at random from l colors.
class RandColour final : public OnlineAlgorithm {
 public:
  explicit RandColour(std::uint64_t seed, ColorDivisor divisor = ColorDivisor::kLnNLnN,
                      int num_colors = 0);

  std::string name() const override { return "randcolour"; }
  void init(const Universe& universe, std::size_t fmin) override;
  PartitionId assign(const Subset& subset) override;

  int num_colors() const { return colors_; }

 private:
  std::uint64_t seed_;
  ColorDivisor divisor_;
  int requested_;
  int colors_ = 1;
  std::mt19937_64 rng_;
};

// Deterministic online polychromatic coloring: shrink each arrival so every
// element occurs at most fmin times, then recolor the shrunk vertex against a
// conditional-expectation tracker in which every hyperedge has exactly fmin
// vertices. The color is the partition id.
class PolyOn final : public OnlineAlgorithm {
 public:
  explicit PolyOn(int num_colors = 0);

  std::string name() const override { return "polyon"; }
  void init(const Universe& universe, std::size_t fmin) override;
  PartitionId assign(const Subset& subset) override;
  std::vector<std::string> finish() override;

  int num_colors() const { return colors_; }
  const ExpectationTracker& tracker() const { return *tracker_; }
  void set_observer(TrackerObserver obs);

 private:
  int requested_;
  int colors_ = 1;
  std::optional<OnlineShrinker> shrinker_;
  std::optional<ExpectationTracker> tracker_;
  TrackerObserver observer_;
  std::vector<std::size_t> incident_;
};

struct OnlineRunResult {
  Allocation allocation;
  std::size_t covers = 0;
  std::vector<std::string> warnings;
};

// Drives init + one assign per subset, in order.
OnlineRunResult run_online(OnlineAlgorithm& algo, const SubsetSequence& seq,
                           const Universe& universe, std::size_t fmin);

std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name, std::uint64_t seed);

}  // namespace dscp

#include "dscp/online.hpp"

#include "dscp/offline.hpp"
#include "dscp/rng.hpp"

namespace dscp {

void GreedyCover::init(const Universe& universe, std::size_t /*fmin*/) {
  n_ = universe.n;
  current_ = 0;
  covered_ = ElementSet(n_);
  covered_count_ = 0;
}

PartitionId GreedyCover::assign(const Subset& subset) {
  if (covered_count_ == n_) {
    ++current_;
    covered_.clear();
    covered_count_ = 0;
  }
  for (Element e : subset) {
    if (e < n_ && covered_.insert(e)) ++covered_count_;
  }
  return current_;
}

RandColour::RandColour(std::uint64_t seed, ColorDivisor divisor, int num_colors)
    : seed_(seed), divisor_(divisor), requested_(num_colors) {}

void RandColour::init(const Universe& universe, std::size_t fmin) {
  if (requested_ > 0) {
    colors_ = requested_;
  } else {
    colors_ = divisor_ == ColorDivisor::kLnN ? color_count_ln_n(universe.n, fmin)
                                             : default_color_count(universe.n, fmin);
  }
  rng_.seed(seed_);
}

PartitionId RandColour::assign(const Subset& /*subset*/) {
  return static_cast<PartitionId>(uniform_below(rng_, static_cast<std::uint64_t>(colors_)));
}

PolyOn::PolyOn(int num_colors) : requested_(num_colors) {}

void PolyOn::set_observer(TrackerObserver obs) {
  observer_ = std::move(obs);
  if (tracker_) tracker_->set_observer(observer_);
}

void PolyOn::init(const Universe& universe, std::size_t fmin) {
  if (fmin == 0) throw std::invalid_argument("polyon needs a declared fmin of at least 1");
  colors_ = requested_ > 0 ? requested_ : default_color_count(universe.n, fmin);
  shrinker_.emplace(universe, fmin);
  tracker_.emplace(colors_, universe.n, fmin);
  if (observer_) tracker_->set_observer(observer_);
}

PartitionId PolyOn::assign(const Subset& subset) {
  const Subset shrunk = shrinker_->push(subset);
  incident_.assign(shrunk.begin(), shrunk.end());
  return tracker_->recolor_argmin(incident_);
}

std::vector<std::string> PolyOn::finish() {
  std::vector<std::string> warnings;
  const auto missing = shrinker_->deficient();
  if (!missing.empty()) {
    warnings.push_back("declared fmin " + std::to_string(shrinker_->fmin()) + " exceeds the " +
                       "frequency of " + std::to_string(missing.size()) +
                       " element(s), first " + std::to_string(missing.front()) +
                       "; guarantee void");
  }
  return warnings;
}

OnlineRunResult run_online(OnlineAlgorithm& algo, const SubsetSequence& seq,
                           const Universe& universe, std::size_t fmin) {
  OnlineRunResult r;
  algo.init(universe, fmin);
  r.allocation.partition_of.reserve(seq.size());
  for (std::size_t j = 0; j < seq.size(); ++j) {
    const PartitionId p = algo.assign(seq[j]);
    if (p < 0) {
      throw ProtocolViolation(algo.name() + " returned negative partition id " +
                              std::to_string(p) + " for subset " + std::to_string(j));
    }
    r.allocation.partition_of.push_back(p);
  }
  r.warnings = algo.finish();
  r.covers = count_covers(r.allocation, seq, universe);
  return r;
}

std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name, std::uint64_t seed) {
  if (name == "greedy") return std::make_unique<GreedyCover>();
  if (name == "randcolour") return std::make_unique<RandColour>(seed);
  if (name == "randcolour-ln") return std::make_unique<RandColour>(seed, ColorDivisor::kLnN);
  if (name == "polyon") return std::make_unique<PolyOn>();
  throw std::invalid_argument("unknown online algorithm '" + name + "'");
}

}  // namespace dscp

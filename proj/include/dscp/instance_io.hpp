#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

#include "dscp/core.hpp"

namespace dscp {

// Text instance format:
//   n <N>
//   fmin <K>          (optional, directly after the n line)
//   one line per subset: space-separated ids in [0, N); blank line = empty subset
// Lines starting with '#' are comments. File order is arrival order.
struct Instance {
  Universe universe{1};
  std::optional<std::size_t> fmin;
  SubsetSequence subsets;
};

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::filesystem::path& path);

void write_instance(std::ostream& out, const Instance& inst);
void write_instance(std::ostream& out, const Universe& universe,
                    std::optional<std::size_t> fmin, std::span<const Subset> subsets);
void write_instance_file(const std::filesystem::path& path, const Instance& inst);

}  // namespace dscp

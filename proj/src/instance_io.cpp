#include "dscp/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace dscp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_count(std::string_view tok, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw MalformedInstance("line " + std::to_string(line_no) + ": expected an integer, got '" +
                            std::string(tok) + "'");
  }
  return v;
}

bool keyword_line(std::string_view line, std::string_view key, std::string_view& rest) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key) return false;
  if (line[key.size()] != ' ' && line[key.size()] != '\t') return false;
  rest = trim(line.substr(key.size()));
  return true;
}

}  // namespace

Instance read_instance(std::istream& in) {
  Instance inst;
  bool have_n = false;
  bool header_done = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (!line.empty() && line.front() == '#') continue;
    std::string_view rest;
    if (!have_n) {
      if (line.empty()) continue;
      if (!keyword_line(line, "n", rest)) {
        throw MalformedInstance("line " + std::to_string(line_no) + ": expected 'n <N>'");
      }
      inst.universe = Universe(parse_count(rest, line_no));
      have_n = true;
      continue;
    }
    if (!header_done) {
      header_done = true;
      if (keyword_line(line, "fmin", rest)) {
        inst.fmin = parse_count(rest, line_no);
        continue;
      }
    }
    std::vector<Element> ids;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto end = line.find_first_of(" \t", pos);
      const auto tok = line.substr(pos, end == std::string_view::npos ? line.npos : end - pos);
      if (!tok.empty()) {
        const std::size_t id = parse_count(tok, line_no);
        if (id >= inst.universe.n) {
          throw MalformedInstance("line " + std::to_string(line_no) + ": element " +
                                  std::to_string(id) + " outside [0, " +
                                  std::to_string(inst.universe.n) + ")");
        }
        ids.push_back(static_cast<Element>(id));
      }
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    inst.subsets.emplace_back(std::move(ids));
  }
  if (!have_n) throw MalformedInstance("missing 'n <N>' header");
  return inst;
}

Instance read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  write_instance(out, inst.universe, inst.fmin, inst.subsets);
}

void write_instance(std::ostream& out, const Universe& universe,
                    std::optional<std::size_t> fmin, std::span<const Subset> subsets) {
  out << "n " << universe.n << '\n';
  if (fmin) out << "fmin " << *fmin << '\n';
  std::string line;
  for (const Subset& s : subsets) {
    line.clear();
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k) line += ' ';
      line += std::to_string(s.members()[k]);
    }
    line += '\n';
    out << line;
  }
}

void write_instance_file(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_instance(out, inst);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace dscp

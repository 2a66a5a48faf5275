#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "dscp/experiment.hpp"
#include "json.hpp"

namespace dscp {

const char* const kCsvHeader = "trial,n,m,fmin,algo,covers,upper_bound,ratio_lower,seed,millis";

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::logic_error("to_chars failed");
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view tok, const char* field) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::runtime_error(std::string("bad value for ") + field + ": '" + std::string(tok) + "'");
  }
  return v;
}

double parse_double(std::string_view tok, const char* field) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  return parse_number<double>(tok, field);
}

void check_record(const ExperimentRecord& r) {
  if (r.covers > r.upper_bound) {
    throw std::logic_error("record for trial " + std::to_string(r.trial) + " (" + r.algo +
                           ") reports " + std::to_string(r.covers) + " covers above bound " +
                           std::to_string(r.upper_bound));
  }
}

}  // namespace

void emit_results(std::ostream& out, const std::vector<ExperimentRecord>& records,
                  ResultFormat format) {
  for (const auto& r : records) check_record(r);
  if (format == ResultFormat::kCsv) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
      out << r.trial << ',' << r.n << ',' << r.m << ',' << r.fmin << ',' << r.algo << ','
          << r.covers << ',' << r.upper_bound << ',' << format_double(r.ratio_lower) << ','
          << r.seed << ',' << format_double(r.millis) << '\n';
    }
    return;
  }
  // nlohmann's float output is shortest round-trip as well.
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["trial"] = r.trial;
    j["n"] = r.n;
    j["m"] = r.m;
    j["fmin"] = r.fmin;
    j["algo"] = r.algo;
    j["covers"] = r.covers;
    j["upper_bound"] = r.upper_bound;
    if (std::isinf(r.ratio_lower)) {
      j["ratio_lower"] = nullptr;
    } else {
      j["ratio_lower"] = r.ratio_lower;
    }
    j["seed"] = r.seed;
    j["millis"] = r.millis;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

void emit_results(const std::filesystem::path& path,
                  const std::vector<ExperimentRecord>& records, ResultFormat format) {
  std::ostringstream buf;
  emit_results(buf, records, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << buf.str();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<ExperimentRecord> parse_results(std::istream& in, ResultFormat format) {
  std::vector<ExperimentRecord> records;
  if (format == ResultFormat::kJson) {
    const auto arr = nlohmann::json::parse(in);
    for (const auto& j : arr) {
      ExperimentRecord r;
      r.trial = j.at("trial").get<std::size_t>();
      r.n = j.at("n").get<std::size_t>();
      r.m = j.at("m").get<std::size_t>();
      r.fmin = j.at("fmin").get<std::size_t>();
      r.algo = j.at("algo").get<std::string>();
      r.covers = j.at("covers").get<std::size_t>();
      r.upper_bound = j.at("upper_bound").get<std::size_t>();
      const auto& ratio = j.at("ratio_lower");
      r.ratio_lower =
          ratio.is_null() ? std::numeric_limits<double>::infinity() : ratio.get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.millis = j.at("millis").get<double>();
      records.push_back(std::move(r));
    }
    return records;
  }

  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("missing or unexpected CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 10) throw std::runtime_error("CSV row has " + std::to_string(f.size()) + " fields");
    ExperimentRecord r;
    r.trial = parse_number<std::size_t>(f[0], "trial");
    r.n = parse_number<std::size_t>(f[1], "n");
    r.m = parse_number<std::size_t>(f[2], "m");
    r.fmin = parse_number<std::size_t>(f[3], "fmin");
    r.algo = std::string(f[4]);
    r.covers = parse_number<std::size_t>(f[5], "covers");
    r.upper_bound = parse_number<std::size_t>(f[6], "upper_bound");
    r.ratio_lower = parse_double(f[7], "ratio_lower");
    r.seed = parse_number<std::uint64_t>(f[8], "seed");
    r.millis = parse_double(f[9], "millis");
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace dscp

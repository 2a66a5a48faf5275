#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <sys/types.h>
#include <vector>

#include "dscp/online.hpp"

namespace dscp {

// Runs `command` under /bin/sh and speaks the line protocol on its stdio:
//
//   -> INIT <n> <fmin>
//   -> SUBSET[ <id>]*      one per arrival
//   <- ASSIGN <pid>        exactly one reply per SUBSET
//   -> END
//
// Any deviation (malformed or unsolicited reply, timeout, early exit)
// throws ProtocolViolation. Subset j+1 is never sent before reply j arrives.
class ExternalAlgorithm final : public OnlineAlgorithm {
 public:
  explicit ExternalAlgorithm(std::string command,
                             std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~ExternalAlgorithm() override;
  ExternalAlgorithm(const ExternalAlgorithm&) = delete;
  ExternalAlgorithm& operator=(const ExternalAlgorithm&) = delete;

  std::string name() const override { return "external"; }
  void init(const Universe& universe, std::size_t fmin) override;
  PartitionId assign(const Subset& subset) override;
  std::vector<std::string> finish() override;

 private:
  void spawn();
  void send(const std::string& line);
  std::string receive_line();
  bool output_pending();
  void reap(bool force);
  [[noreturn]] void fail(const std::string& what);

  std::string command_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
  std::size_t sent_ = 0;
};

// Serves a built-in algorithm over the same protocol on in/out, so that it
// can act as the child of an ExternalAlgorithm. Returns 0 on a clean END,
// 2 on malformed input.
int serve_protocol(OnlineAlgorithm& algo, std::istream& in, std::ostream& out);

}  // namespace dscp

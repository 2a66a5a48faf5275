#include "dscp/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace dscp {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return static_cast<int>(std::max<std::int64_t>(0, left.count()));
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_decimal(std::string_view tok, std::uint64_t& v) {
  if (tok.empty()) return false;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
  }
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

ExternalAlgorithm::ExternalAlgorithm(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  ::signal(SIGPIPE, SIG_IGN);
}

ExternalAlgorithm::~ExternalAlgorithm() { reap(true); }

void ExternalAlgorithm::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw std::runtime_error("pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw std::runtime_error("pipe failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::signal(SIGPIPE, SIG_DFL);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
  ::fcntl(from_child_, F_SETFL, ::fcntl(from_child_, F_GETFL) | O_NONBLOCK);
  buffer_.clear();
  eof_ = false;
  sent_ = 0;
}

void ExternalAlgorithm::reap(bool force) {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    if (force) ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
}

void ExternalAlgorithm::fail(const std::string& what) {
  reap(true);
  throw ProtocolViolation("external algorithm: " + what);
}

void ExternalAlgorithm::send(const std::string& line) {
  const auto deadline = Clock::now() + timeout_;
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t w = ::write(to_child_, line.data() + off, line.size() - off);
    if (w > 0) {
      off += static_cast<std::size_t>(w);
      continue;
    }
    if (w < 0 && errno == EINTR) continue;
    if (w < 0 && errno == EPIPE) fail("child closed its input");
    if (w < 0 && errno != EAGAIN) fail(std::string("write failed: ") + std::strerror(errno));
    pollfd p{to_child_, POLLOUT, 0};
    const int ms = remaining_ms(deadline);
    if (ms == 0 || ::poll(&p, 1, ms) == 0) fail("timed out writing to child");
  }
}

std::string ExternalAlgorithm::receive_line() {
  const auto deadline = Clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (eof_) fail("child closed its output");
    pollfd p{from_child_, POLLIN, 0};
    const int ms = remaining_ms(deadline);
    if (ms == 0) fail("timed out after " + std::to_string(timeout_.count()) + " ms");
    const int rc = ::poll(&p, 1, ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) fail("timed out after " + std::to_string(timeout_.count()) + " ms");
    char chunk[4096];
    const ssize_t r = ::read(from_child_, chunk, sizeof chunk);
    if (r > 0) {
      buffer_.append(chunk, static_cast<std::size_t>(r));
    } else if (r == 0) {
      eof_ = true;
    } else if (errno != EAGAIN && errno != EINTR) {
      fail(std::string("read failed: ") + std::strerror(errno));
    }
  }
}

bool ExternalAlgorithm::output_pending() {
  if (!buffer_.empty()) return true;
  if (eof_) return false;
  char chunk[4096];
  const ssize_t r = ::read(from_child_, chunk, sizeof chunk);
  if (r > 0) {
    buffer_.append(chunk, static_cast<std::size_t>(r));
    return true;
  }
  if (r == 0) eof_ = true;
  return false;
}

void ExternalAlgorithm::init(const Universe& universe, std::size_t fmin) {
  reap(true);
  spawn();
  send("INIT " + std::to_string(universe.n) + ' ' + std::to_string(fmin) + '\n');
}

PartitionId ExternalAlgorithm::assign(const Subset& subset) {
  if (pid_ < 0) throw std::logic_error("ExternalAlgorithm::assign before init");
  if (output_pending()) {
    fail("unsolicited output before SUBSET " + std::to_string(sent_));
  }
  std::string line = "SUBSET";
  for (Element e : subset) {
    line += ' ';
    line += std::to_string(e);
  }
  line += '\n';
  send(line);
  const std::string reply = receive_line();
  const std::string_view body = trim_right(reply);
  constexpr std::string_view kAssign = "ASSIGN ";
  std::uint64_t pid = 0;
  if (body.substr(0, kAssign.size()) != kAssign ||
      !parse_decimal(body.substr(kAssign.size()), pid) ||
      pid > static_cast<std::uint64_t>(INT64_MAX)) {
    fail("malformed reply to SUBSET " + std::to_string(sent_) + ": '" + reply + "'");
  }
  ++sent_;
  return static_cast<PartitionId>(pid);
}

std::vector<std::string> ExternalAlgorithm::finish() {
  if (pid_ < 0) return {};
  if (output_pending()) fail("unsolicited output before END");
  send("END\n");
  ::close(to_child_);
  to_child_ = -1;

  std::vector<std::string> warnings;
  const auto deadline = Clock::now() + timeout_;
  while (!eof_) {
    pollfd p{from_child_, POLLIN, 0};
    const int ms = remaining_ms(deadline);
    if (ms == 0 || ::poll(&p, 1, ms) == 0) {
      warnings.push_back("child did not exit after END; killed");
      reap(true);
      return warnings;
    }
    if (output_pending()) fail("output after END");
  }
  ::close(from_child_);
  from_child_ = -1;
  int status = 0;
  while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
  }
  pid_ = -1;
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    warnings.push_back("child exited abnormally (status " + std::to_string(status) + ")");
  }
  return warnings;
}

int serve_protocol(OnlineAlgorithm& algo, std::istream& in, std::ostream& out) {
  std::string raw;
  bool initialised = false;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    const auto tok = split_ws(trim_right(raw));
    if (tok.empty()) return 2;
    if (tok[0] == "INIT") {
      std::uint64_t nn = 0;
      std::uint64_t fmin = 0;
      if (initialised || tok.size() != 3 || !parse_decimal(tok[1], nn) ||
          !parse_decimal(tok[2], fmin) || nn == 0) {
        return 2;
      }
      n = nn;
      algo.init(Universe(n), fmin);
      initialised = true;
    } else if (tok[0] == "SUBSET") {
      if (!initialised) return 2;
      std::vector<Element> ids;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        std::uint64_t id = 0;
        if (!parse_decimal(tok[k], id) || id >= n) return 2;
        ids.push_back(static_cast<Element>(id));
      }
      out << "ASSIGN " << algo.assign(Subset(std::move(ids))) << '\n' << std::flush;
    } else if (tok[0] == "END" && tok.size() == 1) {
      if (initialised) algo.finish();
      return 0;
    } else {
      return 2;
    }
  }
  return 2;
}

}  // namespace dscp

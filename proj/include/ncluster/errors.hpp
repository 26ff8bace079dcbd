#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncluster {

// Thrown when a computation exceeds the configured term cap or a related
// size guard. The CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error in the expression grammar or the TSV format. position() is a
// 0-based character offset for expressions and a 1-based line number for TSV.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t position)
      : std::runtime_error(msg), pos_(position) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Semantic error while evaluating a parsed expression (e.g. a negative power
// of a multi-term element).
class eval_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Process-wide cap on the number of stored terms per element. Any operation
// whose running result exceeds the cap aborts with resource_error. The cap is
// read atomically by every algebra operation; changing it does not invalidate
// elements already built, but sequence caches remember which indices were
// blocked under the cap active at computation time.
std::size_t term_cap();
void set_term_cap(std::size_t cap);  // cap must be >= 1

inline constexpr std::size_t kDefaultTermCap = 1'000'000;

// Scoped override, mostly for tests.
class TermCapGuard {
 public:
  explicit TermCapGuard(std::size_t cap) : saved_(term_cap()) { set_term_cap(cap); }
  ~TermCapGuard() { set_term_cap(saved_); }
  TermCapGuard(const TermCapGuard&) = delete;
  TermCapGuard& operator=(const TermCapGuard&) = delete;

 private:
  std::size_t saved_;
};

}  // namespace ncluster

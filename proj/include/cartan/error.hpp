#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cartan {

/// Raised when a contract precondition (shape, margins, parameter range) fails.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when text or JSON input cannot be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a soft size guard refuses work. `bound()` names the limit that tripped.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(std::string bound, std::size_t value, std::size_t limit)
      : std::runtime_error("guard exceeded: " + bound + " = " + std::to_string(value) +
                           " > " + std::to_string(limit) + " (use force to override)"),
        bound_(std::move(bound)),
        value_(value),
        limit_(limit) {}

  const std::string& bound() const noexcept { return bound_; }
  std::size_t value() const noexcept { return value_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::string bound_;
  std::size_t value_;
  std::size_t limit_;
};

/// Soft limits shared by all modules. Nothing here is a hard correctness bound;
/// `force` disables every check.
struct Limits {
  std::size_t max_cells = 100;          // a*c for margin enumeration
  std::size_t max_line_sum = 16;        // b for margin enumeration
  std::size_t max_oracle_points = 9;    // m*n*o for the double-coset oracle
  std::size_t max_graph_vertices = 16;  // |V(G)| + |V(H)| for isomorphism tests
  std::size_t search_node_budget = 2'000'000;
  bool force = false;

  void check(const char* bound, std::size_t value, std::size_t limit) const {
    if (!force && value > limit) throw GuardExceeded(bound, value, limit);
  }
};

}  // namespace cartan

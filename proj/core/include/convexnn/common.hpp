#pragma once

#include <stdexcept>
#include <string>

namespace convexnn {

// Raised when an exact/enumerative routine would exceed its work budget.
// CLI maps this to exit code 3.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an iterative solver fails to reach its tolerance.
// CLI maps this to exit code 4.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed files, bad CLI arguments, schema mismatches. CLI exit code 2.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace convexnn

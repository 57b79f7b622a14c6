#pragma once

#include <stdexcept>
#include <string>

namespace emfnet {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario or sub-problem cannot be solved (capacity < users, M > N, ...).
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive search would exceed its enumeration budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace emfnet

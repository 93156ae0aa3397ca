#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

/// Malformed input data: broken edge-list lines, inconsistent TU files,
/// curvature CSV rows that do not match the graph. Maps to exit code 2.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside its valid range or a violated call precondition
/// (probability not in [0,1], k >= n, isolated node, ...). Exit code 1.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Broken internal invariant: an unverifiable transport plan, a solver that
/// exceeded its iteration budget. Exit code 3.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ricci

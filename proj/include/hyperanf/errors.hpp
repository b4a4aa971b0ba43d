#pragma once

#include <stdexcept>

namespace hyperanf {

// Malformed input: edge lists, binary caches, JSON reports.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem trouble: missing files, failed writes.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A resource guard refused the operation (oracle size limits, iteration cap).
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hyperanf

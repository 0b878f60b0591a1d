#pragma once

#include <stdexcept>
#include <string>

namespace evograph {

// Malformed or inconsistent data: bad file contents, failed integrity checks.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failures: missing files, unwritable paths.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evograph

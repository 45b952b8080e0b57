#pragma once

#include <stdexcept>
#include <string>

namespace nlc {

/// Malformed textual or file input.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// A size or resource cap was exceeded.
struct guard_error : std::runtime_error {
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative kernel failed to converge or produced an inconsistent result.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlc

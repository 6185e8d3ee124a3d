#pragma once

#include <stdexcept>
#include <string>

namespace beadforge {

struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

struct CutSequenceError : std::invalid_argument {
  explicit CutSequenceError(const std::string& what) : std::invalid_argument(what) {}
};

struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Work that would exceed what the caller can reasonably enumerate or store.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace beadforge

#pragma once

#include <stdexcept>
#include <string>

namespace evshare {

// Input file could not be parsed (syntax / schema level).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parsed data violates a model invariant; the message names the invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A solve failed for numerical or structural reasons.
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

// Combinatorial guard tripped (e.g. station catalog exceeds its cap).
class SizeError : public std::runtime_error {
 public:
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evshare

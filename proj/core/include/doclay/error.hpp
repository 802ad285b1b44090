#pragma once

#include <stdexcept>
#include <string>

namespace doclay {

// Raised when an input violates a documented precondition or invariant.
// `where` names the offending field or path (e.g. "segments[3].box.left").
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string where, const std::string& what)
      : std::invalid_argument(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// Index or position outside its valid range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A generator could not produce a record for the given page/parameters.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration or I/O failure in the pipeline.
class FatalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace doclay

#pragma once

#include <stdexcept>
#include <string>

namespace lincae {

// Raised when a computation produces non-finite values (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a required on-disk artifact is absent (CLI exit code 4).
struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for malformed files; message carries a byte offset where known.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lincae

#ifndef QTAU_ERRORS_HPP
#define QTAU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qtau {

// Malformed external input (JSON, CSV, CLI specs).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A quantum object violating its invariants (non-Hermitian, non-PSD,
// wrong trace, dimension mismatch, parameter out of range).
class InvalidObjectError : public std::runtime_error {
 public:
  explicit InvalidObjectError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem trouble (unreadable state file, unwritable output path).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A hard mathematical guarantee failed at runtime (bound violated with
// exact inputs, solver non-convergence).
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qtau

#endif

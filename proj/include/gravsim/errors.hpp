#pragma once

#include <stdexcept>
#include <string>

namespace gravsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure to write an output artifact (distinct from ConfigError so the CLI
// can map it to its own exit code).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a circuit still containing a raw Diag4 block reaches a consumer
// that only speaks the elementary alphabet.
class MustDecomposeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace gravsim

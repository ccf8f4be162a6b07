#pragma once

#include <stdexcept>
#include <string>

namespace pantcx {

/// Malformed dart structure: pairing not an involution, partition not covering.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// (g,n) outside the range that carries pant decompositions, or a request
/// that the surface type does not support.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A move applied where it is not defined (loop, leaf edge, bad index).
struct MoveError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A configured size cap was exceeded.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text input that does not follow one of the file formats.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace pantcx

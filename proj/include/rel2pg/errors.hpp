#pragma once

#include <stdexcept>
#include <string>

namespace rel2pg {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed schema or a reference to an undeclared relation/attribute.
struct SchemaError : Error {
  using Error::Error;
};

/// Syntax error in query text, with 1-based position.
struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ")"),
        line(line_),
        column(col_) {}
};

/// A syntactically valid construct outside the supported query class.
struct UnsupportedConstructError : Error {
  std::string construct;
  explicit UnsupportedConstructError(const std::string& what_construct)
      : Error("outside supported class: " + what_construct),
        construct(what_construct) {}
};

/// Bad file content: not the expected format, wrong version, type mismatch.
struct FormatError : Error {
  using Error::Error;
};

}  // namespace rel2pg

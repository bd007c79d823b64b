#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lps {

// Base class of every failure thrown by this library. The CLI maps
// subclasses to exit codes: parse_error -> 3, size_error -> 4, any
// other lps::error -> 2.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A caller passed an argument outside an operation's precondition
// (bad index, universe mismatch, bottom not below top, ...).
class invalid_argument_error : public error {
public:
  using error::error;
};

// A model value violates its own invariants (weight vector breaking
// the V-type constraints, clause with an out-of-range predicate).
class model_error : public error {
public:
  using error::error;
};

// A configuration is inconsistent or names something unknown.
class config_error : public error {
public:
  using error::error;
};

// A combinatorial cap was exceeded; proceeding would run exponential
// work or overflow. Carries no position, only the offending size.
class size_error : public error {
public:
  using error::error;
};

// File or stream failure.
class io_error : public error {
public:
  using error::error;
};

// An operation needs at least one item and got none.
class empty_input_error : public error {
public:
  using error::error;
};

// Text input violated a grammar. Positions are 1-based; 0 means
// "not applicable" (e.g. end of input).
class parse_error : public error {
public:
  parse_error(const std::string& msg, std::size_t line, std::size_t column)
      : error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  explicit parse_error(const std::string& msg) : error(msg), line_(0), column_(0) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace lps

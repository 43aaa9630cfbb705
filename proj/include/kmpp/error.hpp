#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kmpp {

/// Caller violated a documented precondition (bad k, dimension mismatch, bad flag).
class usage_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The data admits no valid answer, e.g. every remaining point already coincides
/// with a chosen center.
class degenerate_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Brute-force enumeration refused because the instance exceeds the evaluation budget.
class guard_error : public std::length_error {
public:
  using std::length_error::length_error;
};

/// Malformed dataset text. Row and column are 1-based; 0 means "not applicable".
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t row, std::size_t column = 0)
      : std::runtime_error(format(what, row, column)), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

private:
  static std::string format(const std::string& what, std::size_t row, std::size_t column) {
    std::string msg;
    if (row != 0) {
      msg += "row " + std::to_string(row);
      if (column != 0) msg += ", column " + std::to_string(column);
      msg += ": ";
    }
    return msg + what;
  }

  std::size_t row_;
  std::size_t column_;
};

} // namespace kmpp

#include "edaplan/errors.hpp"

namespace edaplan {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ":" + std::to_string(column);
  return out + ": " + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(located(message, line, column)), line_(line), column_(column) {}

}  // namespace edaplan

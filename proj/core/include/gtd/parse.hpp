#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gtd/errors.hpp"
#include "gtd/expression.hpp"

namespace gtd {

// Syntax or semantic failure while parsing; carries the byte offset into the
// input and the set of token descriptions that would have been accepted.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset,
             std::vector<std::string> expected)
      : Error(message + " at byte " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownFunctionError : public ParseError {
 public:
  UnknownFunctionError(std::string name, std::size_t offset)
      : ParseError("unknown function '" + name + "'", offset, {"ln"}),
        name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Grammar:
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?        -- right associative
//   atom   := number | identifier | "ln" "(" expr ")" | "(" expr ")"
// Numbers are integers or decimals (optionally with an exponent suffix,
// e.g. 2.5e-3); decimals are read as exact rationals. Identifiers are ASCII
// letters followed by letters, digits or underscores. A Unicode minus sign
// is accepted wherever "-" is. Exponents of "^" must fold to a rational
// constant.
Expression parse(std::string_view text);

}  // namespace gtd

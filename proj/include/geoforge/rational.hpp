#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "geoforge/errors.hpp"

namespace geoforge {

// Exact rational scalar. All verification arithmetic runs on this type;
// doubles appear only at display time.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class ArithmeticError : public DataError {
public:
  using DataError::DataError;
};

class DivisionByZeroError : public ArithmeticError {
public:
  DivisionByZeroError() : ArithmeticError("division by zero") {}
};

// Parses an integer or decimal literal ("5", "-3", "0.5", "16.0") into an
// exact rational. Returns nullopt when the text is not a plain numeral.
std::optional<Rational> parse_decimal(std::string_view text);

// Renders a rational as its shortest exact decimal ("1/2" -> "0.5",
// "8" -> "8"). Falls back to "p/q" when the expansion does not terminate.
std::string format_rational(const Rational& value);

// True when the string is accepted by parse_decimal.
bool is_numeric_literal(std::string_view text);

inline Rational checked_div(const Rational& num, const Rational& den) {
  if (den == 0) throw DivisionByZeroError();
  return num / den;
}

}  // namespace geoforge

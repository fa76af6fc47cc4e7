#include "geoforge/rational.hpp"

#include <cctype>

namespace geoforge {

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa = mantissa * 10 + (text[i] - '0');
    ++digits;
    ++i;
  }
  BigInt denom = 1;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t frac_digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      denom *= 10;
      ++frac_digits;
      ++i;
    }
    if (frac_digits == 0) return std::nullopt;  // "5." is not a literal
    digits += frac_digits;
  }
  if (digits == 0 || i != text.size()) return std::nullopt;
  Rational value(mantissa, denom);
  return negative ? Rational(-value) : value;
}

bool is_numeric_literal(std::string_view text) { return parse_decimal(text).has_value(); }

std::string format_rational(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;

  // A reduced fraction terminates iff the denominator is 2^a * 5^b. The
  // expansion then has max(a, b) fractional digits.
  BigInt d = den;
  unsigned twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    std::string out = negative ? "-" : "";
    out += num.str() + "/" + den.str();
    return out;
  }

  unsigned places = twos > fives ? twos : fives;
  BigInt scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  BigInt scaled = num * scale / den;
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;

  std::string out = negative ? "-" : "";
  out += whole.str();
  if (frac != 0) {
    std::string frac_str = frac.str();
    frac_str.insert(0, places - frac_str.size(), '0');
    while (!frac_str.empty() && frac_str.back() == '0') frac_str.pop_back();
    out += "." + frac_str;
  }
  return out;
}

}  // namespace geoforge

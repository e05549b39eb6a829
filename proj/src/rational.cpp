#include "bwp/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace bwp {

std::string to_decimal(const Rational& value)
{
  std::int64_t den = value.denominator();
  int shift = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++shift;
  }
  if (den != 1) {
    throw std::domain_error("to_decimal: denominator is not a power of two");
  }

  const bool negative = value.numerator() < 0;
  std::int64_t num = negative ? -value.numerator() : value.numerator();
  // n / 2^k == n * 5^k / 10^k
  for (int i = 0; i < shift; ++i) {
    num *= 5;
  }
  std::int64_t scale = 1;
  for (int i = 0; i < shift; ++i) {
    scale *= 10;
  }

  std::string out = negative ? "-" : "";
  out += std::to_string(num / scale);
  out += '.';
  if (shift == 0) {
    out += '0';
  } else {
    std::string frac = std::to_string(num % scale);
    out += std::string(static_cast<std::size_t>(shift) - frac.size(), '0') + frac;
  }
  return out;
}

double to_double(const Rational& value)
{
  return boost::rational_cast<double>(value);
}

Rational dyadic_from_double(double value, int max_shift)
{
  if (!std::isfinite(value)) {
    throw std::domain_error("dyadic_from_double: non-finite value");
  }
  double scaled = value;
  std::int64_t den = 1;
  for (int shift = 0; shift <= max_shift; ++shift) {
    if (std::floor(scaled) == scaled && std::fabs(scaled) < 9.0e15) {
      return Rational(static_cast<std::int64_t>(scaled), den);
    }
    scaled *= 2.0;
    den *= 2;
  }
  throw std::domain_error("dyadic_from_double: value is not on a dyadic grid");
}

}  // namespace bwp

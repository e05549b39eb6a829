#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace bwp {

/// Exact rational quantity; used for milliseconds on the simulation clock and
/// for half-subcarrier frequency centers.
using Rational = boost::rational<std::int64_t>;

/// Simulation time in milliseconds.
using Millis = Rational;

/// Formats a rational with a power-of-two denominator as an exact decimal.
/// Integers keep one fractional digit ("3.0"). Throws std::domain_error if the
/// denominator has an odd factor.
std::string to_decimal(const Rational& value);

double to_double(const Rational& value);

/// Exact conversion of a dyadic double (denominator ≤ 2^max_shift) to a
/// rational. Throws std::domain_error when no such representation exists.
Rational dyadic_from_double(double value, int max_shift = 20);

}  // namespace bwp

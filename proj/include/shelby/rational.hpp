#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace shelby {

/// Exact rational arithmetic for condition checks and the analytic utility
/// calculus. Every formula in the analysis is a rational function of the
/// protocol parameters, so boundary cases (condition thresholds hit with
/// equality) classify exactly instead of drowning in float rounding.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses plain decimal or scientific notation ("30", "5e-7", "0.9998",
/// "-1.25e2") into an exact rational. Throws std::invalid_argument on
/// malformed input. Locale-independent.
Rational parse_decimal(const std::string& text);

/// Exact decimal rendering when the denominator is of the form 2^a * 5^b
/// (always true for values that came from decimal text), "num/den" otherwise.
std::string format_exact(const Rational& value);

double to_double(const Rational& value);

/// Nearest integer, halves rounded up (toward +infinity).
BigInt round_half_up(const Rational& value);

}  // namespace shelby

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace schutz {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

// Accepts "p", "p/q" and finite decimals such as "0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Closest fraction with denominator at most max_den (continued fractions).
Rational best_approximation(double value, std::int64_t max_den);

// ⌈q⌉ as a machine integer.
long ceil_to_long(const Rational& q);

}  // namespace schutz

#include "schutz/rational.hpp"

#include "schutz/error.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace schutz {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ParseError("empty rational");
  try {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      bool neg = s[0] == '-';
      std::string body = neg ? s.substr(1) : s;
      dot = body.find('.');
      std::string digits = body.substr(0, dot) + body.substr(dot + 1);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad decimal: " + s);
      Rational num{boost::multiprecision::mpz_int(digits)};
      boost::multiprecision::mpz_int den = 1;
      for (std::size_t i = dot + 1; i < body.size(); ++i) den *= 10;
      Rational q = num / Rational(den);
      return neg ? Rational(-q) : q;
    }
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    if (num.empty() || num.find_first_not_of("-0123456789") != std::string::npos)
      throw ParseError("bad rational: " + s);
    if (slash == std::string::npos) return Rational(boost::multiprecision::mpz_int(num));
    std::string den = s.substr(slash + 1);
    if (den.empty() || den.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad rational: " + s);
    boost::multiprecision::mpz_int d(den);
    if (d == 0) throw ParseError("zero denominator: " + s);
    return Rational(boost::multiprecision::mpz_int(num)) / Rational(d);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    throw ParseError("bad rational: " + s);
  }
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational best_approximation(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) throw InvalidInput("non-finite value");
  bool neg = value < 0;
  double x = std::fabs(value);
  // Convergents h/k of the continued fraction of x.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (a > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 4)) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) {
      // Best semiconvergent within the bound.
      std::int64_t t = (max_den - k0) / k1;
      std::int64_t hs = t * h1 + h0, ks = t * k1 + k0;
      if (ks > 0 && std::fabs(x - double(hs) / double(ks)) < std::fabs(x - double(h1) / double(k1))) {
        h1 = hs;
        k1 = ks;
      }
      break;
    }
    std::int64_t h2 = ai * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  Rational q = Rational(h1) / Rational(k1);
  return neg ? Rational(-q) : q;
}

long ceil_to_long(const Rational& q) {
  boost::multiprecision::mpz_int n = numerator(q), d = denominator(q);
  boost::multiprecision::mpz_int c = n / d;
  if (c * d < n) c += 1;
  return c.convert_to<long>();
}

}  // namespace schutz

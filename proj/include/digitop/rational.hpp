#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "digitop/error.hpp"

namespace digitop {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p/q", "p" or "-p/q". Throws ParseError on anything else.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { return ParseError("malformed rational \"" + std::string(text) + "\""); };
  if (text.empty()) throw bad();
  auto digits_ok = [](std::string_view s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start) return false;
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!digits_ok(num)) throw bad();
  BigInt p(std::string(num[0] == '+' ? num.substr(1) : num));
  if (slash == std::string_view::npos) return Rational(p);
  const std::string_view den = text.substr(slash + 1);
  if (!digits_ok(den) || den[0] == '-' || den[0] == '+') throw bad();
  BigInt q{std::string(den)};
  if (q == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
  return Rational(p, q);
}

// Canonical "p/q" form; integers print without a denominator.
inline std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace digitop

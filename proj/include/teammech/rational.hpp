#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace teammech {

// Exact rational arithmetic everywhere in the core. Floating point is for
// display and Monte Carlo cross-checks only.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

// Accepts "3", "-3", "3/4", "-3/4", "30%", "12.5" (finite decimals).
inline Rat rat_parse(const std::string& text) {
  std::string s = text;
  bool percent = false;
  if (!s.empty() && s.back() == '%') {
    percent = true;
    s.pop_back();
  }
  Rat value;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      value = Rat(num, den);
    } else {
      auto dot = s.find('.');
      if (dot == std::string::npos) {
        value = Rat(BigInt(s));
      } else {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        BigInt den = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        value = Rat(BigInt(digits), den);
      }
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse rational: '" + text + "'");
  }
  if (percent) value /= 100;
  return value;
}

inline std::string rat_decimal(const Rat& r, int digits) {
  BigInt num = numerator(r), den = denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt whole = num / den, rem = num % den;
  std::string out = (neg ? "-" : "") + whole.str();
  if (digits > 0) {
    out += ".";
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out += (rem / den).str();
      rem %= den;
    }
  }
  return out;
}

}  // namespace teammech

#include "melnikov/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace melnikov {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Decimal digits only; leading zeros would select octal in the string constructor.
Integer decimal(std::string_view s) {
  s.remove_prefix(std::min(s.find_first_not_of('0'), s.size() - 1));
  return Integer{std::string(s)};
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not an integer: " + std::string(s));
  Integer v = decimal(s);
  return neg ? Integer(-v) : v;
}

Integer pow10(long k) {
  Integer r = 1;
  for (long i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(text.substr(0, slash));
    std::string_view qs = text.substr(slash + 1);
    if (!qs.empty() && qs.front() == '+') qs.remove_prefix(1);
    if (!all_digits(qs)) throw std::invalid_argument("bad denominator in " + std::string(text));
    Integer q = decimal(qs);
    if (q == 0) throw std::invalid_argument("zero denominator in " + std::string(text));
    return Rational(p, q);
  }

  bool neg = false;
  std::string_view s = text;
  if (s.front() == '+' || s.front() == '-') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view es = s.substr(e + 1);
    bool eneg = false;
    if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
      eneg = es.front() == '-';
      es.remove_prefix(1);
    }
    if (!all_digits(es) || es.size() > 6) throw std::invalid_argument("bad exponent in " + std::string(text));
    exponent = std::stol(std::string(es));
    if (eneg) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw std::invalid_argument("bad decimal literal: " + std::string(text));
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("bad numeric literal: " + std::string(text));
    digits = std::string(s);
  }
  Integer mant = decimal(digits);
  if (neg) mant = -mant;
  if (exponent >= 0) return Rational(mant * pow10(exponent));
  return Rational(mant, pow10(-exponent));
}

std::string to_string(const Rational& r) {
  Integer q = denominator(r);
  if (q == 1) return numerator(r).str();
  return numerator(r).str() + "/" + q.str();
}

}  // namespace melnikov

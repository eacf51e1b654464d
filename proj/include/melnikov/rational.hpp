#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace melnikov {

/// Exact rational scalar used by the reduction engine and the PF algebra.
/// Expression templates are disabled so the type composes with Eigen.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// a/b with the sign moved to the numerator (the backend needs b > 0).
inline Rational make_rational(long a, long b) { return b < 0 ? Rational(-a, -b) : Rational(a, b); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double r) { return r; }

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Parses "p/q", an integer, or a decimal literal with optional exponent
/// ("-0.125", "3e-2") into an exact rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& r);

}  // namespace melnikov

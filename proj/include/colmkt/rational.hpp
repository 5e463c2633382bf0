#ifndef COLMKT_RATIONAL_HPP
#define COLMKT_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

#include "errors.hpp"

namespace colmkt
{

/**
 * Exact arbitrary-precision rational.  GMP keeps values canonical
 * (gcd(p,q) = 1, q > 0), so equality and sign tests are exact and every
 * serialized value has a unique "p/q" (or bare "p") form.
 */
using Rational = boost::multiprecision::mpq_rational;

/** Arbitrary-precision integer, used by the fraction-free elimination. */
using Integer = boost::multiprecision::mpz_int;

using RatVec = std::vector<Rational>;

/**
 * Parse "p/q" or "p" with optional leading minus into an exact rational.
 * Throws `ParseError` on malformed input or zero denominator.
 */
Rational parse_rational(const std::string& text);

/** Canonical string form: "p/q" when q != 1, bare "p" otherwise. */
std::string to_string(const Rational& value);

/** Sum of a vector's entries. */
Rational vec_sum(const RatVec& v);

/** Inner product; throws `DimensionMismatch` on length mismatch. */
Rational dot(const RatVec& a, const RatVec& b);

}   // namespace colmkt

#endif   // COLMKT_RATIONAL_HPP

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace qred {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// num/den for any nonzero den; the two-argument Rational constructor rejects negative denominators.
Rational ratio(BigInt num, BigInt den);

BigInt binomial(std::int64_t n, std::int64_t k);
BigInt big_pow(std::uint64_t base, std::uint64_t exponent);

/// |S_w| = C(n,w)(q-1)^w.
BigInt sphere_size(std::uint32_t q, std::size_t n, std::size_t w);
/// |B_t| = sum_{i<=t} S_i.
BigInt ball_size(std::uint32_t q, std::size_t n, std::size_t t);

double to_double(const BigInt& x);
double to_double(const Rational& x);
/// log_q of a positive rational, accurate for values far outside double range.
double log_base(const Rational& x, double base);

/// Decimal with `digits` significant digits ("%.{digits}g").
std::string format_sig(double x, int digits);
/// Rounds to `digits` significant digits; used to pin JSON number bytes.
double round_sig(double x, int digits);

}  // namespace qred

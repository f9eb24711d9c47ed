#include "qred/exact.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace qred {

Rational ratio(BigInt num, BigInt den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt big_pow(std::uint64_t base, std::uint64_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

BigInt sphere_size(std::uint32_t q, std::size_t n, std::size_t w) {
  if (w > n) return 0;
  return binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(w)) * big_pow(q - 1, w);
}

BigInt ball_size(std::uint32_t q, std::size_t n, std::size_t t) {
  BigInt total = 0;
  for (std::size_t i = 0; i <= std::min(t, n); ++i) total += sphere_size(q, n, i);
  return total;
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

double to_double(const Rational& x) {
  // Split to keep huge numerators/denominators out of overflow.
  const BigInt& num = boost::multiprecision::numerator(x);
  const BigInt& den = boost::multiprecision::denominator(x);
  if (num == 0) return 0.0;
  const long nbits = static_cast<long>(boost::multiprecision::msb(boost::multiprecision::abs(num)));
  const long dbits = static_cast<long>(boost::multiprecision::msb(den));
  if (nbits < 1000 && dbits < 1000) return num.convert_to<double>() / den.convert_to<double>();
  const long shift_n = std::max(0L, nbits - 60), shift_d = std::max(0L, dbits - 60);
  const double mant = BigInt(num >> shift_n).convert_to<double>() / BigInt(den >> shift_d).convert_to<double>();
  return std::ldexp(mant, static_cast<int>(shift_n - shift_d));
}

double log_base(const Rational& x, double base) {
  const BigInt& num = boost::multiprecision::numerator(x);
  const BigInt& den = boost::multiprecision::denominator(x);
  if (num <= 0) throw std::domain_error("log of non-positive value");
  auto log2_of = [](const BigInt& v) {
    const long bits = static_cast<long>(boost::multiprecision::msb(v));
    const long shift = std::max(0L, bits - 60);
    return std::log2(BigInt(v >> shift).convert_to<double>()) + static_cast<double>(shift);
  };
  return (log2_of(num) - log2_of(den)) / std::log2(base);
}

std::string format_sig(double x, int digits) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::strtod(format_sig(x, digits).c_str(), nullptr);
}

}  // namespace qred

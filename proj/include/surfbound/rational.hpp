#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace surfbound {

// All arithmetic in this library is exact.  Integer = arbitrary-precision
// integer, Rational = reduced fraction with positive denominator (both are
// GMP types, which already maintain those invariants).
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

// Renders "p/q", or just "p" for integers.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

// Parses "p" or "p/q".  Throws error(bad_input) on malformed text.
Rational parse_rational(const std::string& text);

bool is_integral(const Rational& r);

// Requires is_integral(r).
Integer to_integer(const Rational& r);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer pow(const Integer& base, unsigned long exp);

// Trial-division factorisation, smallest prime first.
std::vector<std::pair<Integer, unsigned>> factor(Integer n);

bool is_prime(const Integer& n);

long smallest_prime_divisor(const Integer& n);

// Largest k with r an exact k-th power is not needed; this tests one k:
// returns the integer root if n == root^k for some integer root >= 0.
bool perfect_power_root(const Integer& n, unsigned long k, Integer& root);

}  // namespace surfbound

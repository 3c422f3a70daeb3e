#include "surfbound/rational.hpp"

#include "surfbound/errors.hpp"

namespace surfbound {

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_signature: return "InvalidSignature";
    case errc::non_integral_genus: return "NonIntegralGenus";
    case errc::genus_too_small: return "GenusTooSmall";
    case errc::infinite_family: return "InfiniteFamily";
    case errc::not_transitive: return "NotTransitive";
    case errc::order_mismatch: return "OrderMismatch";
    case errc::product_not_identity: return "ProductNotIdentity";
    case errc::inconsistent_genus: return "InconsistentGenus";
    case errc::infinite_abelianization: return "InfiniteAbelianization";
    case errc::trivial_abelianization: return "TrivialAbelianization";
    case errc::invalid_twist: return "InvalidTwist";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::size_cap: return "SizeCap";
    case errc::not_normal: return "NotNormal";
    case errc::prime_does_not_divide: return "PrimeDoesNotDivide";
    case errc::unsupported_signature: return "UnsupportedSignature";
    case errc::no_rule: return "NoRule";
    case errc::no_recipe: return "NoRecipe";
    case errc::bad_input: return "BadInput";
  }
  return "UnknownError";
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(Integer(text));
    }
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) fail(errc::bad_input, "zero denominator in '" + text + "'");
    return make_rational(num, den);
  } catch (const std::invalid_argument&) {
    fail(errc::bad_input, "malformed rational '" + text + "'");
  }
}

bool is_integral(const Rational& r) { return r.get_den() == 1; }

Integer to_integer(const Rational& r) {
  if (!is_integral(r)) fail(errc::bad_input, "rational " + to_string(r) + " is not an integer");
  return r.get_num();
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer pow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

std::vector<std::pair<Integer, unsigned>> factor(Integer n) {
  std::vector<std::pair<Integer, unsigned>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  // 50 Miller-Rabin rounds; GMP returns 2 for certain primes, 1 for probable.
  return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

long smallest_prime_divisor(const Integer& n) {
  if (n < 2) fail(errc::bad_input, "smallest_prime_divisor needs n >= 2");
  if (n % 2 == 0) return 2;
  for (Integer p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return p.get_si();
  }
  return n.get_si();  // n itself is prime
}

bool perfect_power_root(const Integer& n, unsigned long k, Integer& root) {
  if (n < 0) return false;
  Integer r;
  int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  if (exact == 0) return false;
  root = r;
  return true;
}

}  // namespace surfbound

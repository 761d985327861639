#pragma once

// Exact integer/rational arithmetic and the small number-theoretic toolkit
// the rest of the library is built on. Integers and rationals are GMP values;
// mpq_class is kept canonical (positive denominator, lowest terms) at all times.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace dyn {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// p-adic valuation, with nullopt standing for the valuation of zero.
class ExtValuation {
public:
  static ExtValuation infinity() { return ExtValuation{}; }
  static ExtValuation finite(long v) { return ExtValuation{v}; }

  bool is_infinite() const { return !value_.has_value(); }
  long value() const;

  bool operator==(const ExtValuation&) const = default;

private:
  ExtValuation() = default;
  explicit ExtValuation(long v) : value_(v) {}
  std::optional<long> value_;
};

/// b = sigma * p^e, a signed power of a prime.
struct PParam {
  BigInt p;
  unsigned e = 0;
  int sigma = 1;

  PParam() = default;
  PParam(BigInt prime, unsigned exponent, int sign);

  BigInt value() const;
  bool in_p_plus() const { return e >= 1; }
  bool operator==(const PParam&) const = default;
};

struct PrimePower {
  BigInt prime;
  unsigned exponent;
  bool operator==(const PrimePower&) const = default;
};

/// Largest input accepted by is_prime (deterministic Miller-Rabin range).
const BigInt& primality_bound();

bool is_prime(const BigInt& n);

ExtValuation ord_p(const BigRat& q, const BigInt& p);
ExtValuation ord_p(const BigInt& n, const BigInt& p);

/// r with r^d = q if such a rational exists; positive root for even d.
std::optional<BigRat> nth_root_exact(const BigRat& q, unsigned d);

int moebius(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);

struct FactorBudget {
  std::uint64_t trial_bound = 100000;
  std::uint64_t rho_iterations = 1u << 22;
};

/// Complete factorization of |n|, primes ascending.
std::vector<PrimePower> factorize(const BigInt& n, const FactorBudget& budget = {});

/// All positive divisors of |n| from its factorization, ascending.
std::vector<BigInt> divisors_of(const std::vector<PrimePower>& factors);

BigInt height(const BigRat& q);

/// Parses "r/s", "-r/s" or an integer literal; result is canonical.
BigRat parse_rational(std::string_view text);
std::string to_string(const BigRat& q);
std::string to_string(const BigInt& n);

BigInt ipow(const BigInt& base, unsigned long exp);

} // namespace dyn

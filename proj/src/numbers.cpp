#include "numbers.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dyn {

long ExtValuation::value() const {
  if (!value_) throw ArgumentError("valuation is infinite");
  return *value_;
}

PParam::PParam(BigInt prime, unsigned exponent, int sign)
    : p(std::move(prime)), e(exponent), sigma(sign) {
  if (sigma != 1 && sigma != -1) throw ArgumentError("sigma must be +1 or -1");
  if (!is_prime(p)) throw ArgumentError("p = " + p.get_str() + " is not prime");
}

BigInt PParam::value() const {
  BigInt v = ipow(p, e);
  return sigma < 0 ? BigInt(-v) : v;
}

BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

const BigInt& primality_bound() {
  // Miller-Rabin with the first 13 prime bases is exact below this value.
  static const BigInt bound("3317044064679887385961981");
  return bound;
}

namespace {

constexpr std::array<unsigned, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool strong_probable_prime(const BigInt& n, const BigInt& d, unsigned long s, unsigned base) {
  BigInt a = base;
  BigInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const BigInt nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == nm1) return true;
    if (x == 1) return false;
  }
  return false;
}

} // namespace

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n >= primality_bound()) {
    throw ArgumentError("primality of " + n.get_str() + " is outside the certified range");
  }
  for (unsigned p : kWitnesses) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  BigInt d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned base : kWitnesses) {
    if (!strong_probable_prime(n, d, s, base)) return false;
  }
  return true;
}

ExtValuation ord_p(const BigInt& n, const BigInt& p) {
  if (!is_prime(p)) throw ArgumentError("ord_p: " + p.get_str() + " is not prime");
  if (n == 0) return ExtValuation::infinity();
  BigInt rest;
  return ExtValuation::finite(
      static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t())));
}

ExtValuation ord_p(const BigRat& q, const BigInt& p) {
  if (!is_prime(p)) throw ArgumentError("ord_p: " + p.get_str() + " is not prime");
  if (q == 0) return ExtValuation::infinity();
  return ExtValuation::finite(ord_p(q.get_num(), p).value() - ord_p(q.get_den(), p).value());
}

namespace {

std::optional<BigInt> int_root(const BigInt& n, unsigned d) {
  BigInt r;
  BigInt a = abs(n);
  if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), d) == 0) return std::nullopt;
  if (n < 0) r = -r;
  return r;
}

} // namespace

std::optional<BigRat> nth_root_exact(const BigRat& q, unsigned d) {
  if (d == 0) throw ArgumentError("nth_root_exact: d must be positive");
  if (q == 0) return BigRat(0);
  if (d % 2 == 0 && q < 0) return std::nullopt;
  auto num = int_root(q.get_num(), d);
  if (!num) return std::nullopt;
  auto den = int_root(q.get_den(), d);
  if (!den) return std::nullopt;
  BigRat r(*num, *den);
  r.canonicalize();
  return r;
}

int moebius(std::uint64_t n) {
  if (n == 0) throw ArgumentError("moebius: n must be positive");
  int result = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw ArgumentError("divisors: n must be positive");
  std::vector<std::uint64_t> low, high;
  for (std::uint64_t k = 1; k * k <= n; ++k) {
    if (n % k != 0) continue;
    low.push_back(k);
    if (k != n / k) high.push_back(n / k);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

namespace {

// Brent's variant of Pollard rho on x^2 + c. Returns a nontrivial factor.
BigInt rho_split(const BigInt& n, std::uint64_t& budget) {
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1, t;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto step = [&](BigInt& v) {
      v = (v * v + c) % n;
      if (budget == 0) throw BudgetExceededError("factorization work budget exceeded for " + n.get_str());
      --budget;
    };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          t = abs(x - y);
          q = (q * t) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        step(ys);
        g = gcd(BigInt(abs(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_into(const BigInt& n, std::vector<BigInt>& primes, std::uint64_t& budget) {
  if (n == 1) return;
  if (n >= primality_bound()) {
    // Pull out a factor first; only certified-range cofactors can be accepted as prime.
    BigInt f = rho_split(n, budget);
    split_into(f, primes, budget);
    split_into(BigInt(n / f), primes, budget);
    return;
  }
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  BigInt root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    split_into(root, primes, budget);
    split_into(root, primes, budget);
    return;
  }
  BigInt f = rho_split(n, budget);
  split_into(f, primes, budget);
  split_into(BigInt(n / f), primes, budget);
}

} // namespace

std::vector<PrimePower> factorize(const BigInt& n, const FactorBudget& budget) {
  if (n == 0) throw ArgumentError("factorize: n must be nonzero");
  BigInt m = abs(n);
  std::vector<PrimePower> out;
  auto take = [&](unsigned long p) {
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) return;
    BigInt prime = p;
    unsigned long k = mpz_remove(m.get_mpz_t(), m.get_mpz_t(), prime.get_mpz_t());
    out.push_back({prime, static_cast<unsigned>(k)});
  };
  take(2);
  for (std::uint64_t p = 3; p <= budget.trial_bound; p += 2) {
    if (m == 1) break;
    if (BigInt(p) * p > m) break;
    take(p);
  }
  if (m == 1) return out;
  std::vector<BigInt> primes;
  std::uint64_t work = budget.rho_iterations;
  split_into(m, primes, work);
  std::sort(primes.begin(), primes.end());
  for (const auto& p : primes) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

std::vector<BigInt> divisors_of(const std::vector<PrimePower>& factors) {
  std::vector<BigInt> divs{BigInt(1)};
  for (const auto& [p, k] : factors) {
    const std::size_t base = divs.size();
    BigInt pk = 1;
    for (unsigned i = 1; i <= k; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

BigInt height(const BigRat& q) {
  BigInt n = abs(q.get_num());
  return n > q.get_den() ? n : BigInt(q.get_den());
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

BigRat parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  BigInt n{std::string(num)}, dd{std::string(den)};
  if (dd == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  BigRat q(n, dd);
  q.canonicalize();
  return q;
}

std::string to_string(const BigInt& n) { return n.get_str(); }

std::string to_string(const BigRat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

} // namespace dyn

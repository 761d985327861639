#include "dynatomic.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace dyn {

namespace {

void check_args(unsigned d, unsigned n) {
  if (d < 2) throw ArgumentError("d must be at least 2");
  // d^n must stay inside the degree budget.
  std::uint64_t deg = 1;
  for (unsigned i = 0; i < n; ++i) {
    deg *= d;
    if (deg > degree_budget()) {
      throw BudgetExceededError("d^n = " + std::to_string(d) + "^" + std::to_string(n) +
                                " exceeds the degree budget");
    }
  }
}

HomBiPoly x_minus_b_y() {
  HomBiPoly f(1, VarSet::b);
  f.set_coeff(1, MultiPoly::constant(1, VarSet::b));
  f.set_coeff(0, -MultiPoly::b());
  return f;
}

DynPair next_level(const DynPair& prev, unsigned d) {
  DynPair out;
  out.level = prev.level + 1;
  out.variant = prev.variant;
  out.F = prev.F * prev.G.pow(d - 1);
  if (prev.variant == Variant::plain) {
    out.G = prev.F.pow(d).scaled(MultiPoly::a()) + prev.G.pow(d).scaled(MultiPoly::b());
  } else {
    HomBiPoly lifted = (x_minus_b_y() * prev.F.pow(d)).exact_div(HomBiPoly::y());
    out.G = lifted + prev.G.pow(d).scaled(MultiPoly::b());
  }
  return out;
}

DynPair base_level(Variant v) {
  DynPair p;
  p.variant = v;
  if (v == Variant::plain) {
    p.F = HomBiPoly::x();
    p.G = HomBiPoly::y();
  } else {
    p.F = HomBiPoly::y();
    p.G = HomBiPoly::x();
  }
  return p;
}

class PairCache {
public:
  std::shared_ptr<const DynPair> get(Variant v, unsigned d, unsigned n) {
    const auto key = std::pair{v, d};
    {
      std::shared_lock lock(mutex_);
      auto it = levels_.find(key);
      if (it != levels_.end() && it->second.size() > n) return it->second[n];
    }
    std::unique_lock lock(mutex_);
    auto& levels = levels_[key];
    if (levels.empty()) levels.push_back(std::make_shared<const DynPair>(base_level(v)));
    while (levels.size() <= n) {
      levels.push_back(std::make_shared<const DynPair>(next_level(*levels.back(), d)));
    }
    return levels[n];
  }

private:
  std::shared_mutex mutex_;
  std::map<std::pair<Variant, unsigned>, std::vector<std::shared_ptr<const DynPair>>> levels_;
};

PairCache& pair_cache() {
  static PairCache cache;
  return cache;
}

// Divides the product of the mu = +1 factors by the product of the mu = -1 factors.
template <typename FactorFn>
HomBiPoly moebius_quotient(unsigned n, FactorFn factor) {
  std::optional<HomBiPoly> num, den;
  for (std::uint64_t m : divisors(n)) {
    const int mu = moebius(n / m);
    if (mu == 0) continue;
    auto& acc = mu > 0 ? num : den;
    HomBiPoly f = factor(static_cast<unsigned>(m));
    acc = acc ? *acc * f : std::move(f);
  }
  if (!den) return *num;
  return num->exact_div(*den);
}

} // namespace

std::shared_ptr<const DynPair> fg_pair(unsigned d, unsigned n) {
  check_args(d, n);
  return pair_cache().get(Variant::plain, d, n);
}

std::shared_ptr<const DynPair> tilde_fg_pair(unsigned d, unsigned n) {
  check_args(d, n);
  return pair_cache().get(Variant::tilde, d, n);
}

std::uint64_t nu(unsigned d, unsigned n) {
  if (d < 2 || n < 1) throw ArgumentError("nu requires d >= 2 and n >= 1");
  BigInt sum = 0;
  for (std::uint64_t m : divisors(n)) {
    sum += moebius(n / m) * ipow(BigInt(d), static_cast<unsigned long>(m - 1));
  }
  if (!sum.fits_ulong_p()) throw BudgetExceededError("nu(d, n) does not fit in 64 bits");
  if (n > 1 && !mpz_divisible_ui_p(sum.get_mpz_t(), d - 1)) {
    throw InternalError("nu(d, n) is not divisible by d - 1");
  }
  return sum.get_ui();
}

HomBiPoly dynatomic(unsigned d, unsigned n) {
  if (n < 1) throw ArgumentError("dynatomic requires n >= 1");
  check_args(d, n);
  return moebius_quotient(n, [d](unsigned m) {
    auto p = fg_pair(d, m);
    return p->F.shifted(0, 1) - p->G.shifted(1, 0);
  });
}

std::shared_ptr<const HomBiPoly> tilde_dynatomic(unsigned d, unsigned n) {
  if (n < 1) throw ArgumentError("tilde_dynatomic requires n >= 1");
  check_args(d, n - 1);
  static std::shared_mutex mutex;
  static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const HomBiPoly>> memo;
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find({d, n}); it != memo.end()) return it->second;
  }
  auto value = std::make_shared<const HomBiPoly>(moebius_quotient(n, [d](unsigned m) {
    auto p = tilde_fg_pair(d, m - 1);
    return p->F - p->G;
  }));
  if (value->degree() != nu(d, n)) throw InternalError("tilde dynatomic degree differs from nu(d, n)");
  std::unique_lock lock(mutex);
  return memo.emplace(std::pair{d, n}, std::move(value)).first->second;
}

std::pair<HomBiPoly, HomBiPoly> lemma1_substitution(unsigned d) {
  HomBiPoly u(d, VarSet::ab);
  u.set_coeff(d, MultiPoly::a());
  u.set_coeff(0, MultiPoly::b());
  HomBiPoly v = HomBiPoly::monomial(d, 0, MultiPoly::constant(1));
  return {std::move(u), std::move(v)};
}

bool verify_lemma1(unsigned d, unsigned n) {
  if (n <= 1) throw ArgumentError("the substitution identity is only asserted for n > 1");
  const auto [u, v] = lemma1_substitution(d);
  HomBiPoly lhs = substitute_pair(*tilde_dynatomic(d, n), u, v);
  HomBiPoly rhs = dynatomic(d, n);
  return lhs.degree() == rhs.degree() && lhs == rhs;
}

bool verify_bridge(unsigned d, unsigned n) {
  if (n < 1) throw ArgumentError("verify_bridge requires n >= 1");
  const auto [u, v] = lemma1_substitution(d);
  auto tilde = tilde_fg_pair(d, n - 1);
  auto plain = fg_pair(d, n);
  HomBiPoly f_lhs = substitute_pair(tilde->F, u, v).shifted(1, 0);
  HomBiPoly f_rhs = plain->F.shifted(0, 1);
  HomBiPoly g_lhs = substitute_pair(tilde->G, u, v);
  return f_lhs == f_rhs && g_lhs == plain->G;
}

EdgeCoeffs edge_coeffs(unsigned d, unsigned n) {
  auto phi = tilde_dynatomic(d, n);
  EdgeCoeffs out;
  out.low = phi->coeff(0);
  out.high = phi->coeff(phi->degree());
  BigInt k = 0;
  for (std::uint64_t m : divisors(n)) {
    BigInt t = ipow(BigInt(d), static_cast<unsigned long>(m - 1)) - 1;
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), d - 1);
    k += moebius(n / m) * t;
  }
  out.exponent = k.get_ui();
  const MultiPoly expected = MultiPoly::term(1, {0, static_cast<std::uint32_t>(out.exponent)}, VarSet::b);
  auto is_pm = [&](const MultiPoly& c) { return c == expected || c == -expected; };
  out.holds = is_pm(out.low) && is_pm(out.high);
  return out;
}

} // namespace dyn

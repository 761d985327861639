#pragma once

// Exact polynomial algebra over Z[a, b].
//
//   MultiPoly  sparse polynomial in the parameters (a, b), integer coefficients
//   HomBiPoly  homogeneous form sum_i c_i x^i y^(deg - i) with MultiPoly c_i
//   RatPoly    dense univariate polynomial over Q (ascending degree)
//
// Everything is a value type; no operation mutates shared state.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "numbers.hpp"

namespace dyn {

/// Parameter variables present in a MultiPoly. Bitmask: b = 1, a = 2.
enum class VarSet : unsigned { none = 0, b = 1, ab = 3 };

inline VarSet operator|(VarSet l, VarSet r) {
  return static_cast<VarSet>(static_cast<unsigned>(l) | static_cast<unsigned>(r));
}
inline bool contains_a(VarSet v) { return (static_cast<unsigned>(v) & 2u) != 0; }
inline bool contains_b(VarSet v) { return (static_cast<unsigned>(v) & 1u) != 0; }

struct Monomial {
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  auto operator<=>(const Monomial&) const = default;
  Monomial operator*(const Monomial& o) const { return {a + o.a, b + o.b}; }
  bool divides(const Monomial& o) const { return a <= o.a && b <= o.b; }
};

struct ParamBindings {
  std::optional<BigRat> a;
  std::optional<BigRat> b;
};

class MultiPoly {
public:
  using Term = std::pair<Monomial, BigInt>;

  MultiPoly() = default;
  explicit MultiPoly(VarSet vars) : vars_(vars) {}

  static MultiPoly constant(const BigInt& c, VarSet vars = VarSet::none);
  static MultiPoly term(const BigInt& c, Monomial m, VarSet vars);
  static MultiPoly a();
  static MultiPoly b();

  VarSet vars() const { return vars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Terms sorted ascending in lex order (a before b); back() is the leading term.
  const std::vector<Term>& terms() const { return terms_; }
  bool is_constant() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly l, const MultiPoly& r) { return l += r; }
  friend MultiPoly operator-(MultiPoly l, const MultiPoly& r) { return l -= r; }
  friend MultiPoly operator*(const MultiPoly& l, const MultiPoly& r);

  /// this += f * g
  void add_mul(const MultiPoly& f, const MultiPoly& g);
  /// this -= f * g
  void sub_mul(const MultiPoly& f, const MultiPoly& g);

  MultiPoly pow(unsigned k) const;
  /// Quotient q with *this == q * g; throws InexactDivisionError otherwise.
  MultiPoly exact_div(const MultiPoly& g) const;

  BigRat evaluate(const ParamBindings& bindings) const;

  /// Structural equality of the term maps.
  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

private:
  template <bool Subtract>
  void accumulate(const MultiPoly& f, const MultiPoly& g);
  void drop_zeros();

  VarSet vars_ = VarSet::none;
  std::vector<Term> terms_;
};

/// Largest degree a HomBiPoly may be constructed with.
inline constexpr unsigned kDefaultDegreeBudget = 1'000'000;
/// Largest homogeneous degree accepted anywhere; process-wide.
unsigned degree_budget();
void set_degree_budget(unsigned budget);

class HomBiPoly {
public:
  /// The zero form of degree 0.
  HomBiPoly() : coeffs_(1) {}
  explicit HomBiPoly(unsigned degree, VarSet vars = VarSet::none);

  static HomBiPoly x();
  static HomBiPoly y();
  /// c * x^i * y^(degree - i)
  static HomBiPoly monomial(unsigned degree, unsigned i, const MultiPoly& c);

  unsigned degree() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  VarSet vars() const { return vars_; }
  const MultiPoly& coeff(unsigned i) const { return coeffs_.at(i); }
  void set_coeff(unsigned i, MultiPoly c);
  std::span<const MultiPoly> coeffs() const { return coeffs_; }
  bool is_zero() const;
  /// Indices of the lowest and highest nonzero coefficients (nullopt for zero).
  std::optional<std::pair<unsigned, unsigned>> support() const;

  HomBiPoly operator-() const;
  HomBiPoly& operator+=(const HomBiPoly& o);
  HomBiPoly& operator-=(const HomBiPoly& o);
  friend HomBiPoly operator+(HomBiPoly l, const HomBiPoly& r) { return l += r; }
  friend HomBiPoly operator-(HomBiPoly l, const HomBiPoly& r) { return l -= r; }
  friend HomBiPoly operator*(const HomBiPoly& l, const HomBiPoly& r);

  HomBiPoly scaled(const MultiPoly& c) const;
  /// Multiplies by x^i y^j.
  HomBiPoly shifted(unsigned i, unsigned j) const;
  HomBiPoly pow(unsigned k) const;
  HomBiPoly exact_div(const HomBiPoly& g) const;

  bool operator==(const HomBiPoly& o) const { return coeffs_ == o.coeffs_; }

private:
  VarSet vars_ = VarSet::none;
  std::vector<MultiPoly> coeffs_;
};

/// f(u, v) for f in (x, y); requires deg u == deg v.
HomBiPoly substitute_pair(const HomBiPoly& f, const HomBiPoly& u, const HomBiPoly& v);

class RatPoly {
public:
  RatPoly() = default;
  explicit RatPoly(std::vector<BigRat> ascending);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<BigRat>& coeffs() const { return coeffs_; }
  BigRat coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigRat(0); }
  const BigRat& leading() const;

  BigRat operator()(const BigRat& w) const;

  friend RatPoly operator+(const RatPoly& l, const RatPoly& r);
  friend RatPoly operator-(const RatPoly& l, const RatPoly& r);
  friend RatPoly operator*(const RatPoly& l, const RatPoly& r);
  /// Quotient and remainder over Q.
  std::pair<RatPoly, RatPoly> divmod(const RatPoly& g) const;
  /// Scales by the lcm of denominators; result has integer coefficients.
  std::vector<BigInt> integer_coeffs() const;
  bool has_integer_coeffs() const;

  bool operator==(const RatPoly&) const = default;

private:
  void trim();
  std::vector<BigRat> coeffs_;
};

/// Substitutes parameter values and dehomogenizes at y = 1.
RatPoly specialize(const HomBiPoly& f, const ParamBindings& bindings);
BigRat specialize(const MultiPoly& f, const ParamBindings& bindings);

/// All rational roots, ascending. With a hint only the hinted candidates are tried
/// and no factoring happens.
std::vector<BigRat> rational_roots(const RatPoly& f,
                                   std::optional<std::span<const BigRat>> hint = std::nullopt,
                                   const FactorBudget& budget = {});

/// Canonical text forms. Terms are ordered by descending x power, then descending
/// lex order on (a, b); products are written with '*', powers above one with '^'.
std::string to_text(const MultiPoly& f);
std::string to_text(const HomBiPoly& f, std::string_view x = "x", std::string_view y = "y");
std::string to_text(const RatPoly& f, std::string_view var = "w");

BigRat rpow(const BigRat& q, unsigned long k);

} // namespace dyn

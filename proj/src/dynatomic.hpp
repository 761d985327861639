#pragma once

// Dynatomic forms for the family z -> z / (a z^d + b).
//
// PLAIN pairs live in Z[a,b][X,Y]:  F_0 = X, G_0 = Y,
//   F_n = F_{n-1} G_{n-1}^(d-1),  G_n = a F_{n-1}^d + b G_{n-1}^d.
// TILDE pairs live in Z[b][x,y]:    F~_0 = y, G~_0 = x,
//   F~_n = F~_{n-1} G~_{n-1}^(d-1),  G~_n = (x - b y) F~_{n-1}^d / y + b G~_{n-1}^d.
//
// Both recurrences are memoized per (variant, d); the cache takes a shared lock
// for lookups and an exclusive lock to append levels, so concurrent callers are safe.

#include <cstdint>
#include <memory>

#include "polynomial.hpp"

namespace dyn {

enum class Variant { plain, tilde };

struct DynPair {
  unsigned level = 0;
  HomBiPoly F;
  HomBiPoly G;
  Variant variant = Variant::plain;
};

std::shared_ptr<const DynPair> fg_pair(unsigned d, unsigned n);
std::shared_ptr<const DynPair> tilde_fg_pair(unsigned d, unsigned n);

/// Degree of the reduced dynatomic form: sum over m | n of mu(n/m) d^(m-1).
std::uint64_t nu(unsigned d, unsigned n);

/// Prod_{m | n} (Y F_m - X G_m)^mu(n/m), in variables (X, Y).
HomBiPoly dynatomic(unsigned d, unsigned n);
/// Prod_{m | n} (F~_{m-1} - G~_{m-1})^mu(n/m), in variables (x, y). Memoized.
std::shared_ptr<const HomBiPoly> tilde_dynatomic(unsigned d, unsigned n);

/// Exact check that the tilde form evaluated at (a X^d + b Y^d, Y^d) equals the
/// plain dynatomic form. Only defined for n > 1.
bool verify_lemma1(unsigned d, unsigned n);

/// Level relation between the two recurrences for n >= 1:
///   X * F~_{n-1}(a X^d + b Y^d, Y^d) = Y * F_n  and  G~_{n-1}(...) = G_n.
bool verify_bridge(unsigned d, unsigned n);

struct EdgeCoeffs {
  MultiPoly low;   // coefficient of y^nu
  MultiPoly high;  // coefficient of x^nu
  std::uint64_t exponent = 0;
  bool holds = false;
};

/// Edge coefficients of the tilde form; holds iff both equal +-b^exponent, where
/// exponent = sum over m | n of mu(n/m) (d^(m-1) - 1)/(d - 1).
EdgeCoeffs edge_coeffs(unsigned d, unsigned n);

/// a X^d + b Y^d and Y^d, the substitution carrying tilde forms to plain ones.
std::pair<HomBiPoly, HomBiPoly> lemma1_substitution(unsigned d);

} // namespace dyn

#include "padic.hpp"

#include <algorithm>

namespace dyn {

NewtonPolygon newton_polygon(const RatPoly& f, const BigInt& p) {
  if (f.is_zero()) throw ArgumentError("Newton polygon of the zero polynomial");
  if (!is_prime(p)) throw ArgumentError(p.get_str() + " is not prime");
  std::vector<std::pair<long, long>> pts;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    const BigRat& c = f.coeffs()[i];
    if (c == 0) continue;
    pts.emplace_back(static_cast<long>(i), ord_p(c, p).value());
  }
  NewtonPolygon np;
  np.prime = p;
  auto& hull = np.vertices;
  // Lower hull, collinear points dropped so slopes strictly increase.
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& [x0, y0] = hull[hull.size() - 2];
      const auto& [x1, y1] = hull.back();
      const __int128 cross = static_cast<__int128>(x1 - x0) * (pt.second - y0) -
                             static_cast<__int128>(y1 - y0) * (pt.first - x0);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const long len = hull[k].first - hull[k - 1].first;
    BigRat slope(hull[k].second - hull[k - 1].second, len);
    slope.canonicalize();
    np.segments.push_back({slope, len});
  }
  return np;
}

std::vector<ValuationCandidate> root_valuation_candidates(const NewtonPolygon& np) {
  std::vector<ValuationCandidate> out;
  for (const auto& s : np.segments) {
    BigRat v = -s.slope;
    out.push_back({v, v.get_den() == 1});
  }
  return out;
}

namespace {

// Exponent j with |n| = p^j, if any.
std::optional<unsigned long> prime_power_exponent(const BigInt& n, const BigInt& p) {
  if (n == 0) return std::nullopt;
  BigInt rest;
  BigInt mag = abs(n);
  unsigned long j = mpz_remove(rest.get_mpz_t(), mag.get_mpz_t(), p.get_mpz_t());
  if (rest != 1) return std::nullopt;
  return j;
}

} // namespace

bool is_p_sided(const RatPoly& f, const BigInt& p) {
  if (f.is_zero()) throw ArgumentError("is_p_sided of the zero polynomial");
  if (!f.has_integer_coeffs()) throw ArgumentError("is_p_sided requires integer coefficients");
  if (f.coeffs().front() == 0) throw ArgumentError("is_p_sided requires a nonzero constant term");
  if (!is_prime(p)) throw ArgumentError(p.get_str() + " is not prime");
  auto edge_ok = [&](const BigRat& c) {
    auto j = prime_power_exponent(c.get_num(), p);
    return j && *j >= 1;
  };
  return edge_ok(f.coeffs().front()) && edge_ok(f.leading());
}

CandidateSet psided_root_candidates(const BigInt& leading, const BigInt& constant, const BigInt& p) {
  if (!is_prime(p)) throw ArgumentError(p.get_str() + " is not prime");
  auto lead_j = prime_power_exponent(leading, p);
  auto const_j = prime_power_exponent(constant, p);
  if (!lead_j || !const_j) {
    throw ArgumentError("psided_root_candidates: edge coefficients must be signed powers of " + p.get_str());
  }
  CandidateSet cs;
  const long lo = -static_cast<long>(*lead_j);
  const long hi = static_cast<long>(*const_j);
  for (long k = lo; k <= hi; ++k) {
    BigRat v = k >= 0 ? BigRat(ipow(p, static_cast<unsigned long>(k)))
                      : BigRat(BigInt(1), ipow(p, static_cast<unsigned long>(-k)));
    cs.values.push_back(v);
    cs.values.push_back(-v);
  }
  std::sort(cs.values.begin(), cs.values.end());
  return cs;
}

std::string to_text(const NewtonPolygon& np) {
  std::string out = "prime=" + np.prime.get_str() + "\n";
  for (const auto& [i, v] : np.vertices) {
    out += "vertex=" + std::to_string(i) + "," + std::to_string(v) + "\n";
  }
  for (const auto& s : np.segments) {
    out += "slope=" + s.slope.get_num().get_str() + "/" + s.slope.get_den().get_str() +
           " length=" + std::to_string(s.length) + "\n";
  }
  return out;
}

} // namespace dyn

#pragma once

// Newton polygons with respect to a prime and the candidate sets they induce
// for rational roots. A segment of slope s carries roots of valuation -s.

#include <string>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace dyn {

struct Segment {
  BigRat slope;
  long length = 0;
  bool operator==(const Segment&) const = default;
};

struct NewtonPolygon {
  BigInt prime;
  std::vector<std::pair<long, long>> vertices;  // (index, valuation)
  std::vector<Segment> segments;
};

NewtonPolygon newton_polygon(const RatPoly& f, const BigInt& p);

struct ValuationCandidate {
  BigRat valuation;
  bool integral = false;
};

/// One entry per segment, valuation = -slope, in segment order.
std::vector<ValuationCandidate> root_valuation_candidates(const NewtonPolygon& np);

/// True iff leading coefficient and constant term are both +-p^k with k >= 1.
bool is_p_sided(const RatPoly& f, const BigInt& p);

struct CandidateSet {
  std::vector<BigRat> values;  // ascending
};

/// {sigma p^k : -ord_p(leading) <= k <= ord_p(constant)}; inputs must be +-p^j.
CandidateSet psided_root_candidates(const BigInt& leading, const BigInt& constant, const BigInt& p);

/// Fixed text schema: "prime=p", one "vertex=i,v" per vertex, one
/// "slope=num/den length=L" per segment.
std::string to_text(const NewtonPolygon& np);

} // namespace dyn

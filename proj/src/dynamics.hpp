#pragma once

// Exact dynamics of psi(z) = z / (a z^d + b) on P^1(Q), i.e. the homogeneous map
// [X : Y] -> [X Y^(d-1) : a X^d + b Y^d].

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "numbers.hpp"

namespace dyn {

/// A point of P^1(Q) as a coprime pair with Y > 0, or [1 : 0] for infinity.
class ProjPoint {
public:
  ProjPoint() : x_(0), y_(1) {}
  ProjPoint(BigInt x, BigInt y);
  explicit ProjPoint(BigRat q);

  static ProjPoint infinity() { return ProjPoint(1, 0); }
  static ProjPoint parse(std::string_view text);

  const BigInt& X() const { return x_; }
  const BigInt& Y() const { return y_; }
  bool is_infinity() const { return y_ == 0; }
  bool is_zero() const { return x_ == 0; }
  BigRat value() const;
  BigInt height() const;
  ProjPoint negated() const;

  /// "inf", or the rational in lowest terms ("0", "-3/2", "5").
  std::string to_string() const;

  bool operator==(const ProjPoint& o) const { return x_ == o.x_ && y_ == o.y_; }
  /// Finite points by value, infinity last.
  std::strong_ordering operator<=>(const ProjPoint& o) const;

private:
  BigInt x_;
  BigInt y_;
};

struct MapParams {
  unsigned d = 2;
  BigRat a;
  BigRat b;
  std::optional<PParam> pspec;

  MapParams(unsigned degree, BigRat a_value, BigRat b_value, std::optional<PParam> p = std::nullopt);
  static MapParams with_pspec(unsigned degree, BigRat a_value, const PParam& p);

  std::string label() const;
};

/// Reusable evaluator of the map; holds the cleared-denominator coefficients.
class MapStepper {
public:
  explicit MapStepper(const MapParams& params);
  ProjPoint operator()(const ProjPoint& pt);
  void step(const BigInt& x, const BigInt& y, BigInt& out_x, BigInt& out_y);

private:
  unsigned d_;
  BigInt cxy_, cx_, cy_;
  BigInt t1_, t2_, g_;
};

ProjPoint apply(const MapParams& params, const ProjPoint& pt);

enum class OrbitKind { periodic, preperiodic, wandering, undetermined };
std::string_view to_string(OrbitKind kind);

struct OrbitClass {
  OrbitKind kind = OrbitKind::undetermined;
  unsigned tail = 0;
  unsigned period = 0;
  std::vector<ProjPoint> trace;
};

inline constexpr unsigned kDefaultMaxIter = 64;
inline constexpr unsigned kDefaultHeightBitsCap = 256;

OrbitClass orbit_classify(const MapParams& params, const ProjPoint& pt, unsigned max_iter = kDefaultMaxIter,
                          unsigned height_bits_cap = kDefaultHeightBitsCap);
/// Same as orbit_classify with a caller-owned stepper; trace is left empty unless requested.
OrbitClass orbit_classify(MapStepper& stepper, const ProjPoint& pt, unsigned max_iter, unsigned height_bits_cap,
                          bool keep_trace);

std::vector<ProjPoint> preimages(const MapParams& params, const ProjPoint& t);
std::vector<ProjPoint> fixed_points(const MapParams& params);
std::vector<std::pair<ProjPoint, ProjPoint>> two_cycles(const MapParams& params);

/// Rational roots w of the specialized tilde form; memoized per (d, b, n). With
/// pspec the candidates come from the signed prime powers, otherwise from factoring.
std::vector<BigRat> dynatomic_w_roots(const MapParams& params, unsigned n);

/// Points of exact period n found through the tilde dynatomic form. Requires pspec.
std::vector<ProjPoint> periodic_points_dynatomic(const MapParams& params, unsigned n);

struct PortraitLimits {
  unsigned n_max = 3;
  unsigned depth = 8;
  std::size_t node_budget = 10'000;
  unsigned max_iter = kDefaultMaxIter;
  unsigned height_bits_cap = kDefaultHeightBitsCap;
};

struct PortraitNode {
  ProjPoint point;
  ProjPoint image;
  OrbitKind kind = OrbitKind::periodic;
  unsigned tail = 0;
  unsigned period = 0;
};

struct Portrait {
  MapParams params;
  std::vector<PortraitNode> nodes;             // ascending by point
  std::vector<std::vector<ProjPoint>> cycles;  // each starts at its least point
  bool truncated = false;

  std::size_t size() const { return nodes.size(); }
  const PortraitNode* find(const ProjPoint& pt) const;
  bool contains(const ProjPoint& pt) const { return find(pt) != nullptr; }
};

Portrait portrait(const MapParams& params, const PortraitLimits& limits = {});

nlohmann::ordered_json to_json(const MapParams& params);
nlohmann::ordered_json to_json(const Portrait& p);
nlohmann::ordered_json to_json(const OrbitClass& orbit, const ProjPoint& start);
std::string to_text(const Portrait& p);
std::string to_text(const OrbitClass& orbit);

/// FNV-1a over the compact JSON rendering, as 16 hex digits.
std::string portrait_hash(const Portrait& p);

} // namespace dyn

#include "dynamics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <tuple>

#include "dynatomic.hpp"
#include "padic.hpp"
#include "polynomial.hpp"

namespace dyn {

// ---------------------------------------------------------------- ProjPoint

ProjPoint::ProjPoint(BigInt x, BigInt y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_ == 0 && y_ == 0) throw ArgumentError("[0 : 0] is not a point of P^1");
  BigInt g = gcd(x_, y_);
  if (g != 1) {
    mpz_divexact(x_.get_mpz_t(), x_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(y_.get_mpz_t(), y_.get_mpz_t(), g.get_mpz_t());
  }
  if (y_ < 0) {
    x_ = -x_;
    y_ = -y_;
  }
  if (y_ == 0) x_ = 1;
}

ProjPoint ProjPoint::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  return ProjPoint(parse_rational(text));
}

ProjPoint::ProjPoint(BigRat q) {
  q.canonicalize();
  x_ = q.get_num();
  y_ = q.get_den();
}

BigRat ProjPoint::value() const {
  if (is_infinity()) throw ArgumentError("infinity has no rational value");
  return BigRat(x_, y_);
}

BigInt ProjPoint::height() const {
  BigInt ax = abs(x_);
  return ax > y_ ? ax : y_;
}

ProjPoint ProjPoint::negated() const {
  if (is_infinity()) return *this;
  return ProjPoint(BigInt(-x_), y_);
}

std::string ProjPoint::to_string() const {
  if (is_infinity()) return "inf";
  if (y_ == 1) return x_.get_str();
  return x_.get_str() + "/" + y_.get_str();
}

std::strong_ordering ProjPoint::operator<=>(const ProjPoint& o) const {
  if (is_infinity() || o.is_infinity()) {
    return static_cast<int>(is_infinity()) <=> static_cast<int>(o.is_infinity());
  }
  const int c = cmp(BigInt(x_ * o.y_), BigInt(o.x_ * y_));
  return c <=> 0;
}

// ---------------------------------------------------------------- MapParams

MapParams::MapParams(unsigned degree, BigRat a_value, BigRat b_value, std::optional<PParam> p)
    : d(degree), a(std::move(a_value)), b(std::move(b_value)), pspec(std::move(p)) {
  a.canonicalize();
  b.canonicalize();
  if (d < 2) throw ArgumentError("d must be at least 2");
  if (a == 0) throw ArgumentError("a must be nonzero");
  if (b == 0) throw ArgumentError("b must be nonzero");
  if (pspec && BigRat(pspec->value()) != b) {
    throw ArgumentError("b = " + dyn::to_string(b) + " does not match sigma*p^e = " + pspec->value().get_str());
  }
}

MapParams MapParams::with_pspec(unsigned degree, BigRat a_value, const PParam& p) {
  return MapParams(degree, std::move(a_value), BigRat(p.value()), p);
}

std::string MapParams::label() const {
  return "d=" + std::to_string(d) + " a=" + dyn::to_string(a) + " b=" + dyn::to_string(b);
}

// ---------------------------------------------------------------- map

MapStepper::MapStepper(const MapParams& params) : d_(params.d) {
  const BigInt& an = params.a.get_num();
  const BigInt& ad = params.a.get_den();
  const BigInt& bn = params.b.get_num();
  const BigInt& bd = params.b.get_den();
  cxy_ = ad * bd;
  cx_ = an * bd;
  cy_ = bn * ad;
}

void MapStepper::step(const BigInt& x, const BigInt& y, BigInt& out_x, BigInt& out_y) {
  mpz_pow_ui(t1_.get_mpz_t(), y.get_mpz_t(), d_ - 1);       // Y^(d-1)
  mpz_mul(t2_.get_mpz_t(), t1_.get_mpz_t(), y.get_mpz_t());  // Y^d
  mpz_mul(out_x.get_mpz_t(), x.get_mpz_t(), t1_.get_mpz_t());
  mpz_mul(out_x.get_mpz_t(), out_x.get_mpz_t(), cxy_.get_mpz_t());
  mpz_pow_ui(t1_.get_mpz_t(), x.get_mpz_t(), d_);            // X^d
  mpz_mul(out_y.get_mpz_t(), t1_.get_mpz_t(), cx_.get_mpz_t());
  mpz_addmul(out_y.get_mpz_t(), t2_.get_mpz_t(), cy_.get_mpz_t());
  // With gcd(X, Y) = 1 the common factor is gcd(cy, X) gcd(cx, Y^(d-1)) times
  // gcd(Y' / that, cxy), so only reductions modulo the small constants are needed.
  mpz_gcd(g_.get_mpz_t(), cy_.get_mpz_t(), x.get_mpz_t());
  if (mpz_cmpabs_ui(cx_.get_mpz_t(), 1) != 0) {
    mpz_abs(t2_.get_mpz_t(), cx_.get_mpz_t());
    mpz_powm_ui(t1_.get_mpz_t(), y.get_mpz_t(), d_ - 1, t2_.get_mpz_t());
    mpz_gcd(t1_.get_mpz_t(), t1_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mul(g_.get_mpz_t(), g_.get_mpz_t(), t1_.get_mpz_t());
  }
  if (mpz_cmp_ui(g_.get_mpz_t(), 1) != 0) {
    mpz_divexact(out_x.get_mpz_t(), out_x.get_mpz_t(), g_.get_mpz_t());
    mpz_divexact(out_y.get_mpz_t(), out_y.get_mpz_t(), g_.get_mpz_t());
  }
  if (mpz_cmp_ui(cxy_.get_mpz_t(), 1) != 0) {
    mpz_gcd(g_.get_mpz_t(), out_y.get_mpz_t(), cxy_.get_mpz_t());
    if (mpz_cmp_ui(g_.get_mpz_t(), 1) != 0) {
      mpz_divexact(out_x.get_mpz_t(), out_x.get_mpz_t(), g_.get_mpz_t());
      mpz_divexact(out_y.get_mpz_t(), out_y.get_mpz_t(), g_.get_mpz_t());
    }
  }
  if (mpz_sgn(out_y.get_mpz_t()) < 0) {
    mpz_neg(out_x.get_mpz_t(), out_x.get_mpz_t());
    mpz_neg(out_y.get_mpz_t(), out_y.get_mpz_t());
  } else if (mpz_sgn(out_y.get_mpz_t()) == 0) {
    mpz_set_ui(out_x.get_mpz_t(), 1);
  }
}

ProjPoint MapStepper::operator()(const ProjPoint& pt) {
  BigInt x, y;
  step(pt.X(), pt.Y(), x, y);
  return ProjPoint(std::move(x), std::move(y));
}

ProjPoint apply(const MapParams& params, const ProjPoint& pt) {
  MapStepper s(params);
  return s(pt);
}

std::string_view to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::periodic: return "periodic";
    case OrbitKind::preperiodic: return "preperiodic";
    case OrbitKind::wandering: return "wandering";
    case OrbitKind::undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

bool exceeds_bits(const BigInt& v, unsigned cap) {
  const std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
  if (bits != cap + 1) return bits > cap + 1;
  return mpz_scan1(v.get_mpz_t(), 0) < cap;  // 2^cap itself does not exceed
}

bool height_exceeds(const BigInt& x, const BigInt& y, unsigned cap) {
  return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t()) > 0 ? exceeds_bits(x, cap) : exceeds_bits(y, cap);
}

} // namespace

OrbitClass orbit_classify(MapStepper& stepper, const ProjPoint& pt, unsigned max_iter, unsigned height_bits_cap,
                          bool keep_trace) {
  if (max_iter < 1) throw ArgumentError("max_iter must be at least 1");
  std::vector<std::pair<BigInt, BigInt>> seen;
  seen.reserve(16);
  seen.emplace_back(pt.X(), pt.Y());
  OrbitClass out;
  BigInt nx, ny;
  for (unsigned it = 0; it < max_iter; ++it) {
    const auto& [cx, cy] = seen.back();
    stepper.step(cx, cy, nx, ny);
    for (std::size_t j = 0; j < seen.size(); ++j) {
      if (seen[j].second == ny && seen[j].first == nx) {
        out.tail = static_cast<unsigned>(j);
        out.period = static_cast<unsigned>(seen.size() - j);
        out.kind = j == 0 ? OrbitKind::periodic : OrbitKind::preperiodic;
        goto done;
      }
    }
    if (height_exceeds(nx, ny, height_bits_cap)) {
      out.kind = OrbitKind::wandering;
      seen.emplace_back(std::move(nx), std::move(ny));
      goto done;
    }
    seen.emplace_back(std::move(nx), std::move(ny));
  }
  out.kind = OrbitKind::undetermined;
done:
  if (keep_trace) {
    out.trace.reserve(seen.size());
    for (auto& [x, y] : seen) out.trace.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

OrbitClass orbit_classify(const MapParams& params, const ProjPoint& pt, unsigned max_iter, unsigned height_bits_cap) {
  MapStepper s(params);
  return orbit_classify(s, pt, max_iter, height_bits_cap, true);
}

// ---------------------------------------------------------------- solving

namespace {

// Rational z with z^d = q; both signs for even d. Nonzero q only.
std::vector<ProjPoint> dth_roots(const BigRat& q, unsigned d) {
  std::vector<ProjPoint> out;
  auto r = nth_root_exact(q, d);
  if (!r) return out;
  out.emplace_back(*r);
  if (d % 2 == 0 && *r != 0) out.emplace_back(BigRat(-*r));
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<ProjPoint> preimages(const MapParams& params, const ProjPoint& t) {
  std::vector<ProjPoint> out;
  if (t.is_zero()) {
    out = {ProjPoint(), ProjPoint::infinity()};
  } else if (t.is_infinity()) {
    out = dth_roots(-params.b / params.a, params.d);
  } else {
    // psi(z) = t  <=>  a t z^d - z + t b = 0 for finite z.
    const BigRat tv = t.value();
    std::vector<BigRat> c(params.d + 1, BigRat(0));
    c[0] = tv * params.b;
    c[1] = -1;
    c[params.d] = params.a * tv;
    for (const BigRat& z : rational_roots(RatPoly(std::move(c)))) out.emplace_back(z);
  }
  MapStepper step(params);
  for (const auto& z : out) {
    if (step(z) != t) throw InternalError("preimage " + z.to_string() + " does not map to " + t.to_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProjPoint> fixed_points(const MapParams& params) {
  std::vector<ProjPoint> out{ProjPoint()};
  const BigRat q = (1 - params.b) / params.a;
  if (q != 0) {
    for (auto& z : dth_roots(q, params.d)) out.push_back(std::move(z));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<ProjPoint, ProjPoint>> two_cycles(const MapParams& params) {
  std::vector<std::pair<ProjPoint, ProjPoint>> out;
  if (params.d % 2 != 0) return out;
  const BigRat q = -(1 + params.b) / params.a;
  if (q == 0) return out;
  auto roots = dth_roots(q, params.d);
  if (roots.size() != 2) return out;
  MapStepper step(params);
  if (step(roots[0]) != roots[1] || step(roots[1]) != roots[0]) {
    throw InternalError("2-cycle candidate failed verification for " + params.label());
  }
  out.emplace_back(roots[0], roots[1]);
  return out;
}

std::vector<BigRat> dynatomic_w_roots(const MapParams& params, unsigned n) {
  using Key = std::tuple<unsigned, std::string, unsigned>;
  static std::shared_mutex mutex;
  static std::map<Key, std::vector<BigRat>> memo;
  Key key{params.d, dyn::to_string(params.b), n};
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const RatPoly f = specialize(*tilde_dynatomic(params.d, n), ParamBindings{std::nullopt, params.b});
  std::vector<BigRat> roots;
  if (params.pspec) {
    const CandidateSet cs =
        psided_root_candidates(f.leading().get_num(), f.coeffs().front().get_num(), params.pspec->p);
    roots = rational_roots(f, std::span<const BigRat>(cs.values));
  } else {
    roots = rational_roots(f);
  }
  std::unique_lock lock(mutex);
  memo.emplace(std::move(key), roots);
  return roots;
}

namespace {

std::vector<ProjPoint> period_points_from_roots(const MapParams& params, unsigned n) {
  std::set<ProjPoint> out;
  MapStepper step(params);
  for (const BigRat& w : dynatomic_w_roots(params, n)) {
    if (w == params.b) continue;  // forces z = 0
    for (const auto& z : dth_roots((w - params.b) / params.a, params.d)) {
      OrbitClass oc = orbit_classify(step, z, std::max(n + 1, 2u), kDefaultHeightBitsCap, false);
      if (oc.kind == OrbitKind::periodic && oc.period == n) out.insert(z);
    }
  }
  return {out.begin(), out.end()};
}

} // namespace

std::vector<ProjPoint> periodic_points_dynatomic(const MapParams& params, unsigned n) {
  if (!params.pspec) throw ArgumentError("periodic_points_dynatomic requires b given as sigma*p^e");
  if (n < 2) throw ArgumentError("periodic_points_dynatomic requires n >= 2");
  return period_points_from_roots(params, n);
}

// ---------------------------------------------------------------- portrait

const PortraitNode* Portrait::find(const ProjPoint& pt) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), pt,
                             [](const PortraitNode& n, const ProjPoint& p) { return n.point < p; });
  if (it == nodes.end() || it->point != pt) return nullptr;
  return &*it;
}

Portrait portrait(const MapParams& params, const PortraitLimits& limits) {
  std::set<ProjPoint> nodes;
  std::vector<ProjPoint> frontier;
  bool truncated = false;
  auto add = [&](const ProjPoint& p) {
    if (nodes.insert(p).second) frontier.push_back(p);
  };

  for (const auto& z : fixed_points(params)) add(z);
  for (const auto& [u, v] : two_cycles(params)) {
    add(u);
    add(v);
  }
  for (unsigned n = 2; n <= limits.n_max; ++n) {
    for (const auto& z : period_points_from_roots(params, n)) add(z);
  }

  for (unsigned round = 0; !frontier.empty() && !truncated; ++round) {
    if (round == limits.depth) {
      truncated = true;
      break;
    }
    std::vector<ProjPoint> next;
    for (const auto& t : frontier) {
      for (auto& z : preimages(params, t)) {
        if (nodes.insert(z).second) next.push_back(std::move(z));
      }
      if (nodes.size() > limits.node_budget) {
        truncated = true;
        break;
      }
    }
    frontier = std::move(next);
  }

  MapStepper step(params);
  std::map<ProjPoint, ProjPoint> edge;
  std::vector<ProjPoint> pending(nodes.begin(), nodes.end());
  while (!pending.empty()) {
    ProjPoint p = std::move(pending.back());
    pending.pop_back();
    ProjPoint img = step(p);
    if (nodes.insert(img).second) {
      if (nodes.size() > limits.node_budget) throw BudgetExceededError("portrait node budget exceeded");
      pending.push_back(img);
    }
    edge.emplace(std::move(p), std::move(img));
  }

  Portrait out{params, {}, {}, truncated};
  std::set<std::vector<ProjPoint>> cycles;
  for (const auto& p : nodes) {
    std::map<ProjPoint, unsigned> pos;
    ProjPoint cur = p;
    unsigned k = 0;
    while (!pos.contains(cur)) {
      pos.emplace(cur, k++);
      cur = edge.at(cur);
    }
    PortraitNode node;
    node.point = p;
    node.image = edge.at(p);
    node.tail = pos.at(cur);
    node.period = k - node.tail;
    node.kind = node.tail == 0 ? OrbitKind::periodic : OrbitKind::preperiodic;
    if (node.tail == 0) {
      std::vector<ProjPoint> cyc{p};
      for (ProjPoint q = edge.at(p); q != p; q = edge.at(q)) cyc.push_back(q);
      std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
      cycles.insert(std::move(cyc));
    }
    out.nodes.push_back(std::move(node));
  }
  out.cycles.assign(cycles.begin(), cycles.end());
  return out;
}

// ---------------------------------------------------------------- serialization

nlohmann::ordered_json to_json(const MapParams& params) {
  nlohmann::ordered_json j;
  j["d"] = params.d;
  j["a"] = dyn::to_string(params.a);
  j["b"] = dyn::to_string(params.b);
  if (params.pspec) {
    j["p"] = params.pspec->p.get_str();
    j["e"] = params.pspec->e;
    j["sigma"] = params.pspec->sigma;
  }
  return j;
}

nlohmann::ordered_json to_json(const Portrait& p) {
  nlohmann::ordered_json j;
  j["params"] = to_json(p.params);
  auto nodes = nlohmann::ordered_json::array();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& n : p.nodes) {
    nodes.push_back({{"point", n.point.to_string()},
                     {"class", to_string(n.kind)},
                     {"period", n.period},
                     {"tail", n.tail}});
    edges.push_back({n.point.to_string(), n.image.to_string()});
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  auto cycles = nlohmann::ordered_json::array();
  for (const auto& c : p.cycles) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& q : c) arr.push_back(q.to_string());
    cycles.push_back(std::move(arr));
  }
  j["cycles"] = std::move(cycles);
  j["count"] = p.nodes.size();
  j["truncated"] = p.truncated;
  return j;
}

nlohmann::ordered_json to_json(const OrbitClass& orbit, const ProjPoint& start) {
  nlohmann::ordered_json j;
  j["point"] = start.to_string();
  j["class"] = to_string(orbit.kind);
  j["tail"] = orbit.tail;
  j["period"] = orbit.period;
  auto trace = nlohmann::ordered_json::array();
  for (const auto& q : orbit.trace) trace.push_back(q.to_string());
  j["trace"] = std::move(trace);
  return j;
}

std::string to_text(const Portrait& p) {
  std::string out = p.params.label() + "\n";
  out += "count=" + std::to_string(p.nodes.size()) + (p.truncated ? " truncated" : "") + "\n";
  for (const auto& n : p.nodes) {
    out += n.point.to_string() + " -> " + n.image.to_string() + " " + std::string(to_string(n.kind)) +
           " period=" + std::to_string(n.period) + " tail=" + std::to_string(n.tail) + "\n";
  }
  for (const auto& c : p.cycles) {
    out += "cycle";
    for (const auto& q : c) out += " " + q.to_string();
    out += "\n";
  }
  return out;
}

std::string to_text(const OrbitClass& orbit) {
  std::string out = "class=" + std::string(to_string(orbit.kind)) + " tail=" + std::to_string(orbit.tail) +
                    " period=" + std::to_string(orbit.period) + "\n";
  for (std::size_t i = 0; i < orbit.trace.size(); ++i) {
    if (i) out += " -> ";
    out += orbit.trace[i].to_string();
  }
  return out + "\n";
}

std::string portrait_hash(const Portrait& p) {
  const std::string s = to_json(p).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

} // namespace dyn

#include "doctest.h"
#include "support.hpp"

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"

using namespace dyn;
using test::P;
using test::Q;
using test::Z;

namespace {

MapParams M(unsigned d, const char* a, const char* b) { return MapParams(d, Q(a), Q(b)); }
MapParams MP(unsigned d, const char* a, long p, unsigned e, int s) {
  return MapParams::with_pspec(d, Q(a), PParam(Z(p), e, s));
}

std::vector<ProjPoint> pts(std::initializer_list<const char*> s) {
  std::vector<ProjPoint> out;
  for (auto* t : s) out.push_back(P(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProjPoint> node_points(const Portrait& p) {
  std::vector<ProjPoint> out;
  for (const auto& n : p.nodes) out.push_back(n.point);
  return out;
}

} // namespace

TEST_CASE("points") {
  CHECK(P("inf").is_infinity());
  CHECK(P("infinity").is_infinity());
  CHECK(P("-6/4").to_string() == "-3/2");
  CHECK(P("0").to_string() == "0");
  CHECK(P("inf").to_string() == "inf");
  CHECK(ProjPoint(Z(4), Z(-6)).to_string() == "-2/3");
  CHECK(ProjPoint(Z(-5), Z(0)) == P("inf"));
  CHECK_THROWS_AS(ProjPoint(Z(0), Z(0)), ArgumentError);
  CHECK_THROWS_AS(P("x"), ParseError);
  CHECK(P("-1") < P("0"));
  CHECK(P("100") < P("inf"));
}

TEST_CASE("map parameters") {
  CHECK_THROWS_AS(M(1, "1", "1"), ArgumentError);
  CHECK_THROWS_AS(M(2, "0", "1"), ArgumentError);
  CHECK_THROWS_AS(M(2, "1", "0"), ArgumentError);
  CHECK_THROWS_AS(MapParams(2, Q("1"), Q("4"), PParam(Z(2), 1, 1)), ArgumentError);
  CHECK_NOTHROW(MapParams(2, Q("1"), Q("-4"), PParam(Z(2), 2, -1)));
  CHECK(MP(3, "1/2", 3, 2, -1).b == -9);
}

TEST_CASE("apply") {
  CHECK(apply(M(2, "-2", "1"), P("1")) == P("-1"));
  for (unsigned d = 2; d <= 5; ++d) {
    CHECK(apply(M(d, "3/7", "-5"), P("inf")) == P("0"));
    CHECK(apply(M(d, "3/7", "-5"), P("0")) == P("0"));
  }
  CHECK(apply(M(2, "-1", "1"), P("1")) == P("inf"));
}

TEST_CASE("apply agrees with rational evaluation") {
  std::mt19937_64 rng(17);
  auto r = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  for (int t = 0; t < 400; ++t) {
    long an = 0, bn = 0;
    while (an == 0) an = r(-30, 30);
    while (bn == 0) bn = r(-300, 300);
    MapParams m(static_cast<unsigned>(r(2, 6)), BigRat(Z(an), Z(r(1, 20))), BigRat(Z(bn), Z(r(1, 9))));
    m.a.canonicalize();
    m.b.canonicalize();
    MapStepper step(m);
    ProjPoint z(BigRat(Z(r(-99, 99)), Z(r(1, 99))));
    for (int k = 0; k < 5 && !z.is_infinity(); ++k) {
      const BigRat v = z.value();
      const BigRat den = m.a * rpow(v, m.d) + m.b;
      const ProjPoint want = den == 0 ? ProjPoint::infinity() : ProjPoint(BigRat(v / den));
      const ProjPoint got = step(z);
      CHECK(got == want);
      z = got;
    }
  }
}

TEST_CASE("orbit classification") {
  auto oc = orbit_classify(M(2, "-2", "1"), P("1"));
  CHECK(oc.kind == OrbitKind::periodic);
  CHECK(oc.period == 2);
  oc = orbit_classify(M(2, "-1", "1"), P("1"));
  CHECK(oc.kind == OrbitKind::preperiodic);
  CHECK(oc.tail == 2);
  CHECK(oc.period == 1);
  CHECK(oc.trace == std::vector<ProjPoint>{P("1"), P("inf"), P("0")});
  oc = orbit_classify(M(2, "1", "1"), P("1"));
  CHECK(oc.kind == OrbitKind::wandering);
  oc = orbit_classify(M(2, "1", "1"), P("1"), 2, 100000);
  CHECK(oc.kind == OrbitKind::undetermined);
  CHECK(to_string(OrbitKind::wandering) == "wandering");
}

TEST_CASE("preimages") {
  CHECK(preimages(M(2, "-1", "1"), P("inf")) == pts({"-1", "1"}));
  CHECK(preimages(M(3, "5/2", "7"), P("0")) == pts({"0", "inf"}));
  CHECK(preimages(M(2, "-2", "1"), P("inf")).empty());
  CHECK(preimages(M(3, "1", "1"), P("inf")) == pts({"-1"}));
  for (const auto& z : preimages(M(2, "1", "-2"), P("-1"))) CHECK(apply(M(2, "1", "-2"), z) == P("-1"));
}

TEST_CASE("preimages agree with a bounded scan") {
  const std::vector<MapParams> maps{M(2, "-1", "1"), M(2, "1", "-2"), M(3, "1", "-2"), M(2, "-1/2", "1"),
                                    M(4, "2", "-3"), M(2, "3/4", "-1"), M(3, "-1/8", "1")};
  for (const auto& m : maps) {
    MapStepper step(m);
    std::map<ProjPoint, std::set<ProjPoint>> scan;
    std::vector<ProjPoint> grid{ProjPoint::infinity()};
    for (long y = 1; y <= 50; ++y)
      for (long x = -50; x <= 50; ++x)
        if (std::gcd(x, y) == 1) grid.emplace_back(Z(x), Z(y));
    for (const auto& z : grid) scan[step(z)].insert(z);
    for (const char* t : {"0", "inf", "1", "-1", "1/2", "-2", "2", "-1/2"}) {
      CAPTURE(m.label());
      CAPTURE(t);
      const auto got = preimages(m, P(t));
      for (const auto& z : scan[P(t)]) CHECK(std::binary_search(got.begin(), got.end(), z));
      for (const auto& z : got) CHECK(step(z) == P(t));
    }
  }
}

TEST_CASE("fixed points and two-cycles") {
  CHECK(fixed_points(M(2, "2", "-1")) == pts({"-1", "0", "1"}));
  CHECK(fixed_points(M(3, "2", "-1")) == pts({"0", "1"}));
  for (unsigned d = 2; d <= 6; ++d) CHECK(fixed_points(M(d, "7/3", "1")) == pts({"0"}));
  auto tc = two_cycles(M(2, "-2", "1"));
  REQUIRE(tc.size() == 1);
  CHECK(tc[0] == std::pair{P("-1"), P("1")});
  CHECK(two_cycles(M(3, "-2", "1")).empty());
  CHECK(two_cycles(M(5, "-1", "3")).empty());
  CHECK(two_cycles(M(2, "1", "1")).empty());
}

TEST_CASE("periodic points via the tilde form") {
  CHECK(periodic_points_dynatomic(MP(2, "-2", 2, 0, 1), 2) == pts({"-1", "1"}));
  for (const char* a : {"1", "-1", "2", "-1/3", "5/7"}) {
    for (unsigned e = 0; e <= 2; ++e) {
      CHECK(periodic_points_dynatomic(MP(3, a, 2, e, 1), 2).empty());
      CHECK(periodic_points_dynatomic(MP(3, a, 3, e, -1), 2).empty());
    }
  }
  CHECK(periodic_points_dynatomic(MP(2, "1", 2, 0, 1), 3).empty());
  CHECK_THROWS_AS(periodic_points_dynatomic(M(2, "1", "1"), 2), ArgumentError);
  CHECK_THROWS_AS(periodic_points_dynatomic(MP(2, "1", 2, 0, 1), 1), ArgumentError);
}

TEST_CASE("portraits") {
  Portrait p = portrait(M(2, "-1", "1"));
  CHECK(node_points(p) == pts({"0", "inf", "1", "-1"}));
  CHECK(p.find(P("1"))->image == P("inf"));
  CHECK(p.find(P("-1"))->image == P("inf"));
  CHECK(p.find(P("inf"))->image == P("0"));
  CHECK(p.find(P("0"))->image == P("0"));
  CHECK(p.cycles == std::vector<std::vector<ProjPoint>>{{P("0")}});
  CHECK_FALSE(p.truncated);

  p = portrait(M(3, "1", "1"));
  CHECK(node_points(p) == pts({"0", "inf", "-1"}));

  p = portrait(M(2, "2", "-1"));
  for (const char* z : {"0", "1", "-1"}) CHECK(p.contains(P(z)));

  p = portrait(M(2, "-2", "1"));
  CHECK(p.cycles == std::vector<std::vector<ProjPoint>>{{P("-1"), P("1")}, {P("0")}});
}

TEST_CASE("portraits agree with the sympy brute-force oracle") {
  const auto o = nlohmann::json::parse(test::golden("oracle_values.json"));
  for (auto it = o["portraits"].begin(); it != o["portraits"].end(); ++it) {
    const std::string key = it.key();
    const auto c1 = key.find(','), c2 = key.find(',', c1 + 1);
    MapParams m(static_cast<unsigned>(std::stoul(key.substr(0, c1))), parse_rational(key.substr(c1 + 1, c2 - c1 - 1)),
                parse_rational(key.substr(c2 + 1)));
    std::vector<std::string> want = *it;
    std::vector<std::string> got;
    for (const auto& n : portrait(m).nodes) got.push_back(n.point.to_string());
    CAPTURE(key);
    CHECK(got == want);
  }
}

TEST_CASE("portrait json schema") {
  const auto j = to_json(portrait(M(2, "-1", "1")));
  CHECK(j["count"] == 4);
  CHECK(j["params"]["a"] == "-1");
  CHECK(j["nodes"].size() == 4);
  CHECK(j["nodes"][0]["point"] == "-1");
  CHECK(j["nodes"][0]["class"] == "preperiodic");
  CHECK(j["edges"][3] == nlohmann::ordered_json::array({"inf", "0"}));
  CHECK(j.dump() == to_json(portrait(M(2, "-1", "1"))).dump());
  CHECK(portrait_hash(portrait(M(2, "-1", "1"))).size() == 16);
}

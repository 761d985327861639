#include "doctest.h"
#include "support.hpp"

#include "dynatomic.hpp"
#include "json.hpp"

#include <atomic>
#include <thread>

using namespace dyn;

namespace {

const HomBiPoly X = HomBiPoly::x();
const HomBiPoly Y = HomBiPoly::y();
const MultiPoly A = MultiPoly::a();
const MultiPoly B = MultiPoly::b();

nlohmann::json oracle() { return nlohmann::json::parse(test::golden("oracle_values.json")); }

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

// sympy prints b**k; the library prints b^k.
std::string sympy_text(const MultiPoly& m) {
  std::string s = to_text(m);
  for (std::size_t i = s.find('^'); i != std::string::npos; i = s.find('^', i + 2)) s.replace(i, 1, "**");
  return s;
}

} // namespace

TEST_CASE("plain pairs") {
  for (unsigned d = 2; d <= 5; ++d) {
    auto p0 = fg_pair(d, 0);
    CHECK(p0->F == X);
    CHECK(p0->G == Y);
    auto p1 = fg_pair(d, 1);
    CHECK(p1->F == X * Y.pow(d - 1));
    CHECK(p1->G == X.pow(d).scaled(A) + Y.pow(d).scaled(B));
  }
  auto p2 = fg_pair(2, 2);
  const HomBiPoly g1 = (X * X).scaled(A) + (Y * Y).scaled(B);
  CHECK(p2->F == X * Y * g1);
  CHECK(p2->G == (X * Y).pow(2).scaled(A) + g1.pow(2).scaled(B));
  CHECK_THROWS_AS(fg_pair(1, 2), ArgumentError);
}

TEST_CASE("tilde pairs") {
  for (unsigned d = 2; d <= 5; ++d) {
    auto p0 = tilde_fg_pair(d, 0);
    CHECK(p0->F == Y);
    CHECK(p0->G == X);
  }
  auto p1 = tilde_fg_pair(2, 1);
  CHECK(p1->F == X * Y);
  CHECK(p1->G == X * Y - (Y * Y).scaled(B) + (X * X).scaled(B));
  auto check_level = [](unsigned d, unsigned n) {
    auto p = tilde_fg_pair(d, n);
    std::uint64_t deg = 1;
    for (unsigned i = 0; i < n; ++i) deg *= d;
    CHECK(p->F.degree() == deg);
    CHECK(p->G.degree() == deg);
    CHECK(p->F.coeff(p->F.degree()).is_zero());  // y | F~_n
  };
  for (unsigned n = 0; n <= 6; ++n) check_level(2, n);
  for (unsigned n = 0; n <= 3; ++n) check_level(5, n);
}

TEST_CASE("nu") {
  const auto o = oracle();
  for (unsigned d = 2; d <= 6; ++d) {
    CHECK(nu(d, 1) == 1);
    CHECK(nu(d, 2) == d - 1);
    for (unsigned n = 1; n <= 6; ++n) {
      CHECK(nu(d, n) == o["nu"][std::to_string(d) + "," + std::to_string(n)].get<std::uint64_t>());
      if (n > 1) CHECK(nu(d, n) % (d - 1) == 0);
    }
  }
  CHECK(nu(2, 3) == 3);
}

TEST_CASE("dynatomic forms match the sympy goldens") {
  for (unsigned d : {2u, 3u}) {
    for (unsigned n : {1u, 2u, 3u}) {
      const std::string tag = "d" + std::to_string(d) + "_n" + std::to_string(n) + ".txt";
      CHECK(to_text(dynatomic(d, n), "X", "Y") == strip(test::golden("dynatomic_" + tag)));
      CHECK(to_text(*tilde_dynatomic(d, n)) == strip(test::golden("tilde_" + tag)));
    }
  }
}

TEST_CASE("small dynatomic forms") {
  for (unsigned d = 2; d <= 4; ++d) {
    CHECK(dynatomic(d, 1) == X * Y.pow(d) - X * (X.pow(d).scaled(A) + Y.pow(d).scaled(B)));
    CHECK(*tilde_dynatomic(d, 1) == Y - X);
  }
  CHECK(*tilde_dynatomic(2, 2) == (Y + X).scaled(B));
  const HomBiPoly q = dynatomic(2, 2);
  auto p1 = fg_pair(2, 1);
  auto p2 = fg_pair(2, 2);
  CHECK(q * (Y * p1->F - X * p1->G) == Y * p2->F - X * p2->G);
}

TEST_CASE("degree law") {
  for (unsigned d = 2; d <= 5; ++d) {
    for (unsigned n = 1; n <= 4; ++n) CHECK(tilde_dynatomic(d, n)->degree() == nu(d, n));
  }
  CHECK(tilde_dynatomic(2, 5)->degree() == nu(2, 5));
  CHECK(tilde_dynatomic(2, 6)->degree() == nu(2, 6));
}

TEST_CASE("substitution identity") {
  CHECK(verify_lemma1(2, 2));
  CHECK(verify_lemma1(3, 2));
  CHECK(verify_lemma1(2, 4));
  CHECK(verify_lemma1(4, 3));
  CHECK_THROWS_AS(verify_lemma1(2, 1), ArgumentError);
  for (unsigned d : {2u, 3u}) {
    for (unsigned n : {1u, 2u, 3u}) CHECK(verify_bridge(d, n));
  }
}

TEST_CASE("edge coefficients match the oracle") {
  const auto o = oracle();
  for (auto it = o["edge"].begin(); it != o["edge"].end(); ++it) {
    const std::string key = it.key();
    const unsigned d = static_cast<unsigned>(std::stoul(key.substr(0, key.find(','))));
    const unsigned n = static_cast<unsigned>(std::stoul(key.substr(key.find(',') + 1)));
    CAPTURE(key);
    const EdgeCoeffs ec = edge_coeffs(d, n);
    CHECK(sympy_text(ec.low) == (*it)["low"].get<std::string>());
    CHECK(sympy_text(ec.high) == (*it)["high"].get<std::string>());
    CHECK(ec.holds);
  }
  const EdgeCoeffs e33 = edge_coeffs(3, 3);
  CHECK(e33.exponent == 4);
  CHECK(edge_coeffs(2, 1).exponent == 0);
  CHECK(to_text(edge_coeffs(2, 1).low) == "1");
  CHECK(to_text(edge_coeffs(2, 1).high) == "-1");
}

TEST_CASE("degree budget") {
  set_degree_budget(100);
  CHECK_THROWS_AS(fg_pair(2, 8), BudgetExceededError);
  CHECK_THROWS_AS(HomBiPoly(101), BudgetExceededError);
  set_degree_budget(0);
  CHECK(degree_budget() == kDefaultDegreeBudget);
}

TEST_CASE("pair cache is safe under concurrent use") {
  std::vector<std::thread> pool;
  std::atomic<int> bad{0};
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (unsigned n = 1; n <= 4; ++n) {
        if (tilde_dynatomic(6, n)->degree() != nu(6, n)) ++bad;
        if (fg_pair(6, n)->level != n) ++bad;
        (void)t;
      }
    });
  }
  for (auto& th : pool) th.join();
  CHECK(bad == 0);
}

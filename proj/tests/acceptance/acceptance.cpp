// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "dynatomic.hpp"
#include "harness.hpp"
#include "padic.hpp"
#include "polynomial.hpp"

using namespace dyn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %2d %s: %s (%.1fs)%s%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), seconds_since(t0),
              o.detail.empty() ? "" : " ", o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

std::vector<std::pair<unsigned, unsigned>> symbolic_range() {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned d = 2; d <= 5; ++d)
    for (unsigned n = 2; n <= 4; ++n) out.emplace_back(d, n);
  out.emplace_back(2, 5);
  out.emplace_back(2, 6);
  return out;
}

unsigned jobs() {
  if (const char* env = std::getenv("DYNATOMIC_JOBS")) return static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t count_prefixed(const Record& r, const char* prefix) {
  return static_cast<std::size_t>(std::count_if(r.violations.begin(), r.violations.end(),
                                                [&](const std::string& v) { return v.starts_with(prefix); }));
}

std::string str(std::size_t v) { return std::to_string(v); }

RatPoly poly_bw(const BigInt& lead, const BigInt& b, unsigned d) {
  std::vector<BigRat> c(d + 1);
  c[0] = -b;
  c[1] = 1;
  c[d] += BigRat(lead);
  return RatPoly(c);
}

// Quotient of f by (w - r) when exact.
std::optional<RatPoly> deflate(const RatPoly& f, long r) {
  auto [q, rem] = f.divmod(RatPoly(std::vector<BigRat>{BigRat(-r), BigRat(1)}));
  if (!rem.is_zero()) return std::nullopt;
  return q;
}

} // namespace

int main() {
  bool all = true;

  all &= report(1, "substitution identity on the symbolic range", [] {
    Outcome o;
    const auto t0 = Clock::now();
    for (auto [d, n] : symbolic_range()) {
      if (!verify_lemma1(d, n)) {
        o.pass = false;
        o.detail += "(" + str(d) + "," + str(n) + ") ";
      }
    }
    const double t = seconds_since(t0);
    if (t >= 60) {
      o.pass = false;
      o.detail += "runtime " + std::to_string(t) + "s over 60s";
    }
    return o;
  });

  all &= report(2, "edge coefficients are +-b^k", [] {
    Outcome o;
    const auto t0 = Clock::now();
    auto range = symbolic_range();
    for (unsigned d = 2; d <= 5; ++d) range.emplace_back(d, 1);
    for (auto [d, n] : range) {
      const EdgeCoeffs ec = edge_coeffs(d, n);
      if (!ec.holds) {
        o.pass = false;
        o.detail += "(" + str(d) + "," + str(n) + ") ";
      }
    }
    if (seconds_since(t0) >= 30) o.pass = false;
    return o;
  });

  all &= report(3, "degree law and (d-1) | nu", [] {
    Outcome o;
    auto range = symbolic_range();
    for (unsigned d = 2; d <= 5; ++d) range.emplace_back(d, 1);
    for (auto [d, n] : range) {
      const std::uint64_t v = nu(d, n);
      if (tilde_dynatomic(d, n)->degree() != v || (n > 1 && v % (d - 1) != 0)) {
        o.pass = false;
        o.detail += "(" + str(d) + "," + str(n) + ") ";
      }
    }
    return o;
  });

  // Criteria 4, 5, 6 and 9 read the records of one sweep over the full grid.
  GridSpec grid;
  grid.height = 50;
  grid.max_iter = 60;
  Report sweep;
  double sweep_seconds = 0;
  {
    const auto t0 = Clock::now();
    sweep = run_sweep(grid, kCheckAll, jobs());
    sweep_seconds = seconds_since(t0);
  }

  all &= report(4, "cycle lengths on the grid", [&] {
    Outcome o;
    std::size_t long_cycles = 0, odd_two = 0, not_antipodal = 0, incomplete = 0, cycle_viol = 0, disagree = 0;
    for (const auto& r : sweep.records) {
      for (unsigned len : r.cycle_lengths) {
        long_cycles += len > 2;
        odd_two += len == 2 && r.params.d % 2 == 1;
      }
      for (const auto& c : r.cycles) not_antipodal += c.size() == 2 && c[1] != c[0].negated();
      incomplete += count_prefixed(r, "incomplete: ");
      cycle_viol += count_prefixed(r, "cycles: ");
      disagree += count_prefixed(r, "agreement: ");
    }
    o.pass = long_cycles + odd_two + not_antipodal + incomplete + cycle_viol + disagree == 0;
    o.detail = "records=" + str(sweep.records.size()) + " max_cycle=" + str(sweep.max_cycle_length) +
               " long=" + str(long_cycles) + " odd_2cycles=" + str(odd_two) + " non_antipodal=" + str(not_antipodal) +
               " incomplete=" + str(incomplete) + " disagreements=" + str(disagree) +
               " sweep=" + std::to_string(static_cast<int>(sweep_seconds)) + "s jobs=" + str(jobs());
    return o;
  });

  all &= report(5, "at most six preperiodic points for d >= 3", [&] {
    Outcome o;
    std::size_t over = 0, disagree = 0, n = 0, max_count = 0;
    for (const auto& r : sweep.records) {
      if (r.params.d < 3) continue;
      ++n;
      max_count = std::max(max_count, r.preper_count);
      over += r.preper_count > 6;
      disagree += !r.agreement || r.brute_count > r.preper_count;
    }
    o.pass = over == 0 && disagree == 0 && n > 0;
    o.detail = "records=" + str(n) + " max_count=" + str(max_count) + " over=" + str(over) +
               " disagreements=" + str(disagree);
    return o;
  });

  all &= report(6, "b = +-1 structure", [&] {
    Outcome o;
    std::size_t n = 0, bad = 0;
    for (const auto& r : sweep.records) {
      const bool plus = r.params.b == 1, minus = r.params.b == -1;
      if (!plus && !minus) continue;
      ++n;
      bool ok = r.agreement;
      for (const auto& c : r.cycles) {
        if (plus && c.size() == 1 && !c[0].is_zero()) ok = false;
        if (minus && c.size() >= 2) ok = false;
      }
      if (minus && r.max_cycle() >= 2) ok = false;
      if (r.params.d >= 3 && r.preper_count > 6) ok = false;
      bad += !ok;
    }
    o.pass = bad == 0 && n == 5 * 182 * 2;
    o.detail = "records=" + str(n) + " bad=" + str(bad);
    return o;
  });

  all &= report(7, "Newton polygon cases", [] {
    Outcome o;
    std::size_t a_cases = 0, bm_cases = 0, bp_cases = 0;
    auto fail = [&](const std::string& s) {
      o.pass = false;
      o.detail += s + " ";
    };
    for (long p : {2L, 3L, 5L}) {
      for (unsigned e = 1; e <= 3; ++e) {
        for (unsigned d = 3; d <= 5; ++d) {
          for (int s : {1, -1}) {
            const BigInt b = s * ipow(BigInt(p), e);
            const std::string tag = "b=" + to_string(b) + ",d=" + str(d);
            auto np = newton_polygon(poly_bw(b, b, d), BigInt(p));
            ++a_cases;
            if (np.segments.size() != 2 || np.segments[0].slope != -BigRat(e) ||
                np.segments[1].slope != BigRat(e) / (d - 1)) {
              fail("A:" + tag);
            }
            // (b - 1) w^d + w - b = (w - 1) Q(w)
            if (auto q = deflate(poly_bw(b - 1, b, d), 1)) {
              for (long qp : {2L, 3L}) {
                const auto k = ord_p(BigInt(b - 1), BigInt(qp));
                if (k.is_infinite() || k.value() == 0) continue;
                ++bm_cases;
                auto nq = newton_polygon(*q, BigInt(qp));
                if (nq.segments.size() != 1 || nq.segments[0].slope != BigRat(k.value()) / (d - 1)) {
                  fail("B:" + tag + ",q=" + str(qp));
                }
              }
            } else {
              fail("B-deflate:" + tag);
            }
            // (b + 1) w^d + w - b = (w + 1) Q(w) for even d only
            auto q = deflate(poly_bw(b + 1, b, d), -1);
            if (q.has_value() != (d % 2 == 0)) fail("C-deflate:" + tag);
            if (!q) continue;
            for (long qp : {2L, 3L}) {
              const auto k = ord_p(BigInt(b + 1), BigInt(qp));
              if (k.is_infinite() || k.value() == 0) continue;
              ++bp_cases;
              auto nq = newton_polygon(*q, BigInt(qp));
              if (nq.segments.size() != 1 || nq.segments[0].slope != BigRat(k.value()) / (d - 1)) {
                fail("C:" + tag + ",q=" + str(qp));
              }
            }
          }
        }
      }
    }
    if (bm_cases == 0 || bp_cases == 0) o.pass = false;
    o.detail += "A=" + str(a_cases) + " B=" + str(bm_cases) + " C=" + str(bp_cases);
    return o;
  });

  all &= report(8, "named instances", [] {
    Outcome o;
    auto pts = [](std::initializer_list<const char*> s) {
      std::vector<ProjPoint> v;
      for (auto* t : s) v.push_back(ProjPoint::parse(t));
      std::sort(v.begin(), v.end());
      return v;
    };
    auto check = [&](bool ok, const char* what) {
      if (!ok) {
        o.pass = false;
        o.detail += std::string(what) + " ";
      }
    };
    const MapParams m1(2, BigRat(-2), BigRat(1)), m2(2, BigRat(-1), BigRat(1)), m3(2, BigRat(2), BigRat(-1));
    const Portrait p1 = portrait(m1), p2 = portrait(m2), p3 = portrait(m3);
    const auto b1 = brute_force_preper(m1, 50, 60), b2 = brute_force_preper(m2, 50, 60),
               b3 = brute_force_preper(m3, 50, 60);
    check(std::count(p1.cycles.begin(), p1.cycles.end(), pts({"-1", "1"})) == 1, "psi(2,-2,1) portrait 2-cycle");
    check(orbit_classify(m1, ProjPoint::parse("1")).period == 2 &&
              std::count(b1.periods.begin(), b1.periods.end(), 2u) == 2,
          "psi(2,-2,1) brute 2-cycle");
    std::vector<ProjPoint> n2;
    for (const auto& n : p2.nodes) n2.push_back(n.point);
    check(n2 == pts({"0", "inf", "1", "-1"}), "psi(2,-1,1) portrait");
    check(b2.preperiodic == pts({"0", "inf", "1", "-1"}), "psi(2,-1,1) brute");
    std::vector<ProjPoint> f3;
    for (const auto& c : p3.cycles)
      if (c.size() == 1) f3.push_back(c[0]);
    check(f3 == pts({"0", "1", "-1"}), "psi(2,2,-1) portrait fixed points");
    check(fixed_points(m3) == pts({"0", "1", "-1"}), "psi(2,2,-1) fixed_points");
    check(std::count(b3.periods.begin(), b3.periods.end(), 1u) == 3, "psi(2,2,-1) brute fixed points");
    return o;
  });

  all &= report(9, "pair transitions with e >= 1", [&] {
    Outcome o;
    std::size_t pairs = 0, exceptions = 0, bad = 0, n = 0;
    for (const auto& r : sweep.records) {
      if (!r.params.pspec || r.params.pspec->e < 1) continue;
      ++n;
      pairs += r.pplemma_pairs;
      exceptions += r.remark_exceptions;
      bad += count_prefixed(r, "pairs: ");
    }
    o.pass = bad == 0 && pairs > 0;
    o.detail = "records=" + str(n) + " pairs=" + str(pairs) + " remark_exceptions=" + str(exceptions) +
               " violations=" + str(bad);
    return o;
  });

  all &= report(10, "property suites", [] {
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t checks = 0;
    auto fail = [&](const std::string& s) {
      o.pass = false;
      if (o.detail.size() < 400) o.detail += s + " ";
    };
    // candidate sets against divisor enumeration
    for (long p : {2L, 3L, 5L, 7L, 11L}) {
      for (unsigned i = 0; i <= 4; ++i) {
        for (unsigned j = 0; j <= 4; ++j) {
          for (int s : {1, -1}) {
            const BigInt lead = s * ipow(BigInt(p), i), cst = ipow(BigInt(p), j);
            std::set<BigRat> want;
            for (const auto& u : divisors_of(factorize(cst)))
              for (const auto& v : divisors_of(factorize(lead)))
                for (int sg : {1, -1}) {
                  BigRat r(sg * u, v);
                  r.canonicalize();
                  want.insert(r);
                }
            const auto got = psided_root_candidates(lead, cst, BigInt(p)).values;
            ++checks;
            if (std::vector<BigRat>(want.begin(), want.end()) != got) fail("candidates p=" + str(p));
          }
        }
      }
    }
    // preimages against a height <= 50 scan
    std::mt19937_64 rng(20240601);
    const auto as = enumerate_a(12);
    const long primes[] = {2, 3, 5, 7, 11};
    for (int t = 0; t < 24; ++t) {
      const unsigned d = 2 + static_cast<unsigned>(rng() % 5);
      const BigRat a = as[rng() % as.size()];
      const BigInt b = (rng() % 2 ? 1 : -1) * ipow(BigInt(primes[rng() % 5]), static_cast<unsigned long>(rng() % 4));
      const MapParams m(d, a, BigRat(b));
      MapStepper step(m);
      std::map<ProjPoint, std::vector<ProjPoint>> scan;
      scan[step(ProjPoint::infinity())].push_back(ProjPoint::infinity());
      for (long y = 1; y <= 50; ++y)
        for (long x = -50; x <= 50; ++x)
          if (std::gcd(x, y) == 1) {
            ProjPoint z{BigInt(x), BigInt(y)};
            scan[step(z)].push_back(z);
          }
      for (const auto& [target, from] : scan) {
        if (target.height() > 50) continue;
        const auto got = preimages(m, target);
        ++checks;
        for (const auto& z : from)
          if (!std::binary_search(got.begin(), got.end(), z)) fail(m.label() + " t=" + target.to_string());
        for (const auto& z : got)
          if (step(z) != target) fail(m.label() + " spurious");
      }
    }
    // rational_roots against planted roots
    for (int t = 0; t < 400; ++t) {
      RatPoly f(std::vector<BigRat>{BigRat(1)});
      std::set<BigRat> planted;
      const int k = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < k; ++i) {
        BigRat r(BigInt(static_cast<long>(rng() % 61) - 30), BigInt(1 + static_cast<long>(rng() % 16)));
        r.canonicalize();
        planted.insert(r);
        f = f * RatPoly(std::vector<BigRat>{-r, BigRat(1)});
      }
      if (t % 3 == 0) f = f * RatPoly(std::vector<BigRat>{BigRat(3), BigRat(0), BigRat(0), BigRat(1)});  // w^3 + 3
      ++checks;
      if (rational_roots(f, std::nullopt) != std::vector<BigRat>(planted.begin(), planted.end())) fail("roots");
    }
    const double secs = seconds_since(t0);
    if (secs >= 300) fail("runtime over 5 min");
    o.detail += "checks=" + str(checks);
    return o;
  });

  std::printf("acceptance %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}

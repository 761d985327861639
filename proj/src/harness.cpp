#include "harness.hpp"
#include "polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

namespace dyn {

BruteForce brute_force_preper(const MapParams& params, unsigned height, unsigned max_iter, unsigned height_bits_cap) {
  if (height < 1) throw ArgumentError("brute force height bound must be positive");
  BruteForce out;
  MapStepper step(params);
  auto visit = [&](const ProjPoint& pt) {
    OrbitClass oc = orbit_classify(step, pt, max_iter, height_bits_cap, false);
    switch (oc.kind) {
      case OrbitKind::periodic:
        out.periods.push_back(oc.period);
        [[fallthrough]];
      case OrbitKind::preperiodic:
        out.preperiodic.push_back(pt);
        break;
      case OrbitKind::undetermined:
        out.undetermined.push_back(pt);
        break;
      case OrbitKind::wandering:
        break;
    }
  };
  visit(ProjPoint::infinity());
  const long h = height;
  for (long y = 1; y <= h; ++y) {
    for (long x = -h; x <= h; ++x) {
      if (std::gcd(x, y) != 1) continue;
      visit(ProjPoint(BigInt(x), BigInt(y)));
    }
  }
  std::sort(out.preperiodic.begin(), out.preperiodic.end());
  std::sort(out.undetermined.begin(), out.undetermined.end());
  return out;
}

namespace {

// q = +-p^k for some integer k.
bool in_signed_prime_powers(const BigRat& q, const BigInt& p) {
  if (q == 0) return false;
  BigInt rest;
  BigInt num = abs(q.get_num());
  mpz_remove(rest.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
  if (rest != 1) return false;
  mpz_remove(rest.get_mpz_t(), q.get_den_mpz_t(), p.get_mpz_t());
  return rest == 1;
}

BigRat shifted_power(const MapParams& params, const ProjPoint& z) {
  return params.a * rpow(z.value(), params.d) + params.b;
}

void check_cycle_structure(const MapParams& params, const Record& r, std::vector<std::string>& fail) {
  const unsigned d = params.d;
  for (unsigned len : r.cycle_lengths) {
    if (len > 2) fail.push_back("cycles: cycle of length " + std::to_string(len));
    if (len == 2 && d % 2 == 1) fail.push_back("cycles: 2-cycle for odd d");
  }
  std::size_t fixed = 0, two = 0;
  for (const auto& c : r.cycles) {
    if (c.size() == 1) ++fixed;
    if (c.size() == 2) {
      ++two;
      if (c[1] != c[0].negated()) fail.push_back("cycles: 2-cycle not of the form {z, -z}: " + c[0].to_string() + ", " + c[1].to_string());
    }
  }
  if (params.b == 1) {
    for (const auto& c : r.cycles) {
      if (c.size() == 1 && !c[0].is_zero()) fail.push_back("cycles: b = 1 with nonzero fixed point " + c[0].to_string());
    }
    if (two > 1) fail.push_back("cycles: b = 1 with more than one 2-cycle");
  }
  if (params.b == -1) {
    if (r.max_cycle() >= 2) fail.push_back("cycles: b = -1 with a cycle of length >= 2");
    if (fixed > (d % 2 == 1 ? 2u : 3u)) fail.push_back("cycles: b = -1 with " + std::to_string(fixed) + " fixed points");
  }
}

void check_pairs(const MapParams& params, const Portrait& portrait, Record& r, std::vector<std::string>& fail) {
  const PParam& ps = *params.pspec;
  const unsigned d = params.d;
  std::optional<BigRat> pr;  // p^r, when (d - 1) | e
  if (ps.e % (d - 1) == 0) pr = BigRat(ipow(ps.p, ps.e / (d - 1)));
  MapStepper step(params);
  for (const auto& node : portrait.nodes) {
    const ProjPoint& z1 = node.point;
    const ProjPoint& z2 = node.image;
    if (z1.is_infinity() || z2.is_infinity()) continue;
    const BigRat q1 = shifted_power(params, z1);
    const BigRat q2 = shifted_power(params, z2);
    if (!in_signed_prime_powers(q1, ps.p) || !in_signed_prime_powers(q2, ps.p)) continue;
    ++r.pplemma_pairs;
    const BigRat v1 = z1.value(), v2 = z2.value();
    bool allowed = v2 == v1 || v2 == -v1;
    if (pr && (v2 == *pr * v1 || v2 == -*pr * v1)) allowed = true;
    if (allowed) continue;
    if (d == 2 && ps.p == 2 && (params.b == 2 || params.b == -2)) {
      // b = 2: a z1^2 = -4, a z2^2 = -1 (z2 fixed); b = -2: a z1^2 = 4, a z2^2 = 1 (z2 of exact period 2).
      const BigRat s = params.b == 2 ? BigRat(-1) : BigRat(1);
      const BigRat az1 = params.a * v1 * v1, az2 = params.a * v2 * v2;
      if (az1 == 4 * s && az2 == s) {
        ++r.remark_exceptions;
        OrbitClass oc = orbit_classify(step, z2, 4, kDefaultHeightBitsCap, false);
        const unsigned want = params.b == 2 ? 1u : 2u;
        if (oc.kind != OrbitKind::periodic || oc.period != want) {
          fail.push_back("pairs: exceptional pair target " + z2.to_string() + " is not of exact period " + std::to_string(want));
        }
        continue;
      }
    }
    fail.push_back("pairs: pair " + z1.to_string() + " -> " + z2.to_string() + " outside {+-z1, +-p^r z1}");
  }
}

int count_rational_special_values(const MapParams& params) {
  int count = 0;
  for (int level : {1, -1, 0}) {
    const BigRat q = (BigRat(level) - params.b) / params.a;
    if (q != 0 && nth_root_exact(q, params.d)) ++count;
  }
  return count;
}

} // namespace

Record evaluate_point(const MapParams& params, const GridSpec& grid, unsigned checks) {
  Record r(params);
  r.gating = params.pspec.has_value();
  std::vector<std::string> fail;
  std::optional<Portrait> portrait_value;
  try {
    PortraitLimits lim;
    lim.n_max = grid.n_max;
    lim.depth = grid.depth;
    lim.node_budget = grid.node_budget;
    lim.max_iter = grid.max_iter;
    lim.height_bits_cap = grid.height_bits_cap;
    portrait_value = portrait(params, lim);
  } catch (const Error& e) {
    r.exceptions.push_back(std::string("portrait: ") + e.what());
  }
  const BruteForce brute = brute_force_preper(params, grid.height, grid.max_iter, grid.height_bits_cap);
  r.brute_count = brute.preperiodic.size();
  for (const auto& u : brute.undetermined) r.exceptions.push_back("undetermined orbit from " + u.to_string());

  std::set<unsigned> lengths(brute.periods.begin(), brute.periods.end());
  if (portrait_value) {
    const Portrait& P = *portrait_value;
    if (P.truncated) r.exceptions.push_back("portrait truncated by depth or node budget");
    r.preper_count = P.size();
    r.portrait_hash = portrait_hash(P);
    r.cycles = P.cycles;
    for (const auto& c : P.cycles) lengths.insert(static_cast<unsigned>(c.size()));
    bool agree = true;
    for (const auto& z : brute.preperiodic) {
      if (!P.contains(z)) {
        agree = false;
        fail.push_back("agreement: brute force found " + z.to_string() + " missing from the portrait");
      }
    }
    const BigInt h = grid.height;
    for (const auto& n : P.nodes) {
      if (n.point.height() <= h && !std::binary_search(brute.preperiodic.begin(), brute.preperiodic.end(), n.point)) {
        agree = false;
        fail.push_back("agreement: portrait node " + n.point.to_string() + " not confirmed by brute force");
      }
    }
    r.agreement = agree;
  }
  r.cycle_lengths.assign(lengths.begin(), lengths.end());

  if (checks & kCheckCycles) check_cycle_structure(params, r, fail);
  if ((checks & kCheckPreper) && params.d >= 3 && r.preper_count > 6) {
    fail.push_back("preper: " + std::to_string(r.preper_count) + " preperiodic points");
  }
  if ((checks & kCheckPairs) && portrait_value && params.pspec && params.pspec->e >= 1) {
    check_pairs(params, *portrait_value, r, fail);
  }
  if ((checks & kCheckRational) && params.d % 2 == 0) {
    r.rational_special_values = count_rational_special_values(params);
    if (r.rational_special_values == 3) fail.push_back("rational: alpha, beta and gamma are all rational");
  }
  // Agreement with the brute-force scan backs the cycle and count checks only.
  if (!(checks & (kCheckCycles | kCheckPreper))) {
    std::erase_if(fail, [](const std::string& s) { return s.starts_with("agreement: "); });
  }

  if (r.gating) {
    for (const auto& e : r.exceptions) r.violations.push_back("incomplete: " + e);
    for (auto& f : fail) r.violations.push_back(std::move(f));
  } else {
    for (auto& f : fail) r.exceptions.push_back("exploratory: " + f);
  }
  return r;
}

nlohmann::ordered_json Record::to_json() const {
  nlohmann::ordered_json j = dyn::to_json(params);
  j["gating"] = gating;
  j["cycle_lengths"] = cycle_lengths;
  auto cyc = nlohmann::ordered_json::array();
  for (const auto& c : cycles) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& q : c) arr.push_back(q.to_string());
    cyc.push_back(std::move(arr));
  }
  j["cycles"] = std::move(cyc);
  j["preper_count"] = preper_count;
  j["brute_count"] = brute_count;
  j["portrait_hash"] = portrait_hash;
  j["agreement"] = agreement;
  j["pplemma_pairs"] = pplemma_pairs;
  j["remark_exceptions"] = remark_exceptions;
  if (rational_special_values >= 0) j["rational_special_values"] = rational_special_values;
  j["exceptions"] = exceptions;
  j["violations"] = violations;
  return j;
}

std::string Report::to_jsonl() const {
  std::string out;
  for (const auto& r : records) out += r.to_json().dump() + "\n";
  return out;
}

std::string Report::to_csv() const {
  std::string out = "d,a,b,max_cycle,preper_count,agreement,violation\n";
  for (const auto& r : records) {
    out += std::to_string(r.params.d) + "," + to_string(r.params.a) + "," + to_string(r.params.b) + "," +
           std::to_string(r.max_cycle()) + "," + std::to_string(r.preper_count) + "," +
           (r.agreement ? "true" : "false") + "," + (r.violations.empty() ? "false" : "true") + "\n";
  }
  return out;
}

nlohmann::ordered_json Report::summary_json() const {
  nlohmann::ordered_json j;
  j["records"] = records.size();
  j["max_cycle_length"] = max_cycle_length;
  j["max_preper_count"] = max_preper_count;
  j["max_preper_count_gated"] = max_preper_count_gated;
  j["pplemma_pairs"] = pplemma_pairs;
  j["remark_exceptions"] = remark_exceptions;
  j["violations"] = violations;
  return j;
}

Report run_sweep(const GridSpec& grid, unsigned checks, unsigned jobs, std::ostream* stream) {
  const std::vector<MapParams> points = grid_points(grid);
  std::vector<std::optional<Record>> slots(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      Record r = [&] {
        try {
          return evaluate_point(points[i], grid, checks);
        } catch (const std::exception& e) {
          Record failed(points[i]);
          failed.exceptions.push_back(e.what());
          failed.violations.push_back(std::string("incomplete: ") + e.what());
          return failed;
        }
      }();
      if (stream) {
        std::lock_guard lock(io);
        *stream << r.to_json().dump() << '\n' << std::flush;
      }
      slots[i] = std::move(r);
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(points.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }

  Report rep;
  rep.records.reserve(points.size());
  for (auto& s : slots) {
    Record& r = *s;
    rep.max_preper_count = std::max(rep.max_preper_count, r.preper_count);
    if (r.gating) {
      rep.max_cycle_length = std::max(rep.max_cycle_length, r.max_cycle());
      if (r.params.d >= 3) rep.max_preper_count_gated = std::max(rep.max_preper_count_gated, r.preper_count);
    }
    rep.pplemma_pairs += r.pplemma_pairs;
    rep.remark_exceptions += r.remark_exceptions;
    for (const auto& v : r.violations) rep.violations.push_back(r.params.label() + ": " + v);
    rep.records.push_back(std::move(r));
  }
  return rep;
}

Report sweep_cycle_lengths(const GridSpec& grid, unsigned jobs) { return run_sweep(grid, kCheckCycles, jobs); }
Report sweep_preper_counts(const GridSpec& grid, unsigned jobs) { return run_sweep(grid, kCheckPreper, jobs); }
Report check_pplemma(const GridSpec& grid, unsigned jobs) { return run_sweep(grid, kCheckPairs, jobs); }
Report check_not_all_rational(const GridSpec& grid, unsigned jobs) {
  return run_sweep(grid, kCheckRational, jobs);
}

} // namespace dyn

#pragma once

// Bounded-height certification sweeps. Every parameter point gets a portrait from
// the solver and an independent brute-force scan of P^1(Q) up to height H; the
// record compares the two and evaluates the theorem predicates.

#include <iosfwd>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "json.hpp"

namespace dyn {

struct GridSpec {
  std::vector<unsigned> d_values{2, 3, 4, 5, 6};
  unsigned a_bound = 12;
  std::vector<BigRat> a_values;  // overrides a_bound when non-empty
  std::vector<unsigned long> primes{2, 3, 5, 7, 11};
  std::vector<unsigned> e_values{0, 1, 2, 3};
  std::vector<int> signs{1, -1};
  std::vector<BigInt> composite_b;  // exploratory, never gating
  unsigned height = 50;
  unsigned max_iter = 60;
  unsigned height_bits_cap = kDefaultHeightBitsCap;
  unsigned depth = 8;
  unsigned n_max = 3;
  std::size_t node_budget = 10'000;
};

/// key = value lines; values are integers, rationals, [lists] or lo..hi ranges.
/// '#' and ';' start comments and [section] headers are ignored.
GridSpec parse_grid(std::string_view text);

/// Reduced fractions r/s with 1 <= s <= bound, 1 <= |r| <= bound, ascending.
std::vector<BigRat> enumerate_a(unsigned bound);

/// Distinct parameter points sorted by (d, a, b). Points from signed prime powers
/// carry pspec; composite b values do not.
std::vector<MapParams> grid_points(const GridSpec& grid);

struct BruteForce {
  std::vector<ProjPoint> preperiodic;   // ascending
  std::vector<ProjPoint> undetermined;  // never silently dropped
  std::vector<unsigned> periods;        // one entry per periodic point found
};

BruteForce brute_force_preper(const MapParams& params, unsigned height, unsigned max_iter,
                              unsigned height_bits_cap = kDefaultHeightBitsCap);

enum Check : unsigned {
  kCheckCycles = 1,
  kCheckPreper = 2,
  kCheckPairs = 4,
  kCheckRational = 8,
  kCheckAll = 15,
};

struct Record {
  explicit Record(MapParams p) : params(std::move(p)) {}

  MapParams params;
  bool gating = true;
  std::vector<unsigned> cycle_lengths;
  std::vector<std::vector<ProjPoint>> cycles;
  std::size_t preper_count = 0;
  std::size_t brute_count = 0;
  std::string portrait_hash;
  bool agreement = false;
  std::size_t pplemma_pairs = 0;
  std::size_t remark_exceptions = 0;
  int rational_special_values = -1;  // how many of alpha, beta, gamma are rational (even d)
  std::vector<std::string> exceptions;
  std::vector<std::string> violations;

  nlohmann::ordered_json to_json() const;
  unsigned max_cycle() const { return cycle_lengths.empty() ? 0 : cycle_lengths.back(); }
};

struct Report {
  std::vector<Record> records;
  unsigned max_cycle_length = 0;
  std::size_t max_preper_count = 0;
  std::size_t max_preper_count_gated = 0;  // gated records with d >= 3
  std::size_t pplemma_pairs = 0;
  std::size_t remark_exceptions = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_jsonl() const;
  std::string to_csv() const;
  nlohmann::ordered_json summary_json() const;
};

Record evaluate_point(const MapParams& params, const GridSpec& grid, unsigned checks);

/// Evaluates every grid point on `jobs` workers. Records are streamed to `stream`
/// in completion order when given; the returned report is sorted by (d, a, b).
Report run_sweep(const GridSpec& grid, unsigned checks, unsigned jobs = 1, std::ostream* stream = nullptr);

Report sweep_cycle_lengths(const GridSpec& grid, unsigned jobs = 1);
Report sweep_preper_counts(const GridSpec& grid, unsigned jobs = 1);
Report check_pplemma(const GridSpec& grid, unsigned jobs = 1);
Report check_not_all_rational(const GridSpec& grid, unsigned jobs = 1);

} // namespace dyn

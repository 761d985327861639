#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "dynatomic/dynatomic.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;

struct Owned {
  char* s = nullptr;
  ~Owned() { dyn_string_free(s); }
};

struct Context {
  dyn_context* ctx = nullptr;
  Context() {
    if (dyn_context_create(&ctx) != DYN_OK) throw std::bad_alloc();
  }
  ~Context() { dyn_context_destroy(ctx); }
};

struct Options {
  unsigned d = 2;
  unsigned n = 1;
  std::string a, b, p, z, t, coeffs, grid, out, format = "text";
  unsigned e = 0;
  int sigma = 1;
  unsigned max_iter = 64;
  unsigned height_bits_cap = 256;
  unsigned n_max = 3;
  unsigned depth = 8;
  std::size_t node_budget = 10000;
  unsigned long long degree_budget = 0;
  unsigned jobs = 0;
  std::vector<std::string> checks;
  bool verbose = false;
};

dyn_format fmt(const Options& o) { return o.format == "json" ? DYN_FORMAT_JSON : DYN_FORMAT_TEXT; }

int fail(const Context& c, dyn_status st) {
  std::cerr << "error: " << dyn_status_name(st) << ": " << dyn_last_error(c.ctx) << "\n";
  return st == DYN_E_ARGUMENT || st == DYN_E_PARSE ? kExitUsage : kExitFailure;
}

void print(const char* s) {
  std::string out(s);
  if (!out.empty() && out.back() != '\n') out += '\n';
  std::cout << out;
}

std::vector<std::string> split_coeffs(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("DYNATOMIC_JOBS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<unsigned>(v);
  }
  return 0;
}

void on_record(const char*, void* user) {
  auto* count = static_cast<std::size_t*>(user);
  if (++*count % 1000 == 0) std::cerr << "records: " << *count << "\n";
}

int run(CLI::App& sub, const Options& o) {
  const std::string cmd = sub.get_name();
  Context c;
  if (o.degree_budget) {
    if (auto st = dyn_set_degree_budget(c.ctx, o.degree_budget); st != DYN_OK) return fail(c, st);
  }
  Owned s;
  dyn_status st = DYN_OK;

  if (cmd == "dynatomic" || cmd == "tilde") {
    st = cmd == "dynatomic" ? dyn_dynatomic_text(c.ctx, o.d, o.n, &s.s) : dyn_tilde_dynatomic_text(c.ctx, o.d, o.n, &s.s);
    if (st != DYN_OK) return fail(c, st);
    if (fmt(o) == DYN_FORMAT_JSON) {
      Owned nu;
      if ((st = dyn_nu(c.ctx, o.d, o.n, &nu.s)) != DYN_OK) return fail(c, st);
      nlohmann::ordered_json j;
      j["d"] = o.d;
      j["n"] = o.n;
      j["variant"] = cmd == "dynatomic" ? "plain" : "tilde";
      j["degree"] = cmd == "tilde" ? nlohmann::ordered_json(std::stoull(nu.s)) : nlohmann::ordered_json(nullptr);
      j["polynomial"] = s.s;
      std::cout << j.dump() << "\n";
    } else {
      print(s.s);
    }
    return kExitOk;
  }
  if (cmd == "verify-lemma1") {
    int holds = 0;
    if ((st = dyn_verify_lemma1(c.ctx, o.d, o.n, &holds)) != DYN_OK) return fail(c, st);
    if (fmt(o) == DYN_FORMAT_JSON) {
      std::cout << nlohmann::ordered_json{{"d", o.d}, {"n", o.n}, {"holds", holds != 0}}.dump() << "\n";
    } else {
      std::cout << (holds ? "OK" : "FAIL") << "\n";
    }
    return holds ? kExitOk : kExitViolation;
  }
  if (cmd == "verify-lemma2") {
    int holds = 0;
    if ((st = dyn_edge_coeffs(c.ctx, o.d, o.n, fmt(o), &s.s, &holds)) != DYN_OK) return fail(c, st);
    print(s.s);
    return holds ? kExitOk : kExitViolation;
  }
  if (cmd == "newton" || cmd == "roots") {
    const auto parts = split_coeffs(o.coeffs);
    std::vector<const char*> ptrs;
    for (const auto& q : parts) ptrs.push_back(q.c_str());
    st = cmd == "newton" ? dyn_newton_polygon(c.ctx, ptrs.data(), ptrs.size(), o.p.c_str(), fmt(o), &s.s)
                         : dyn_rational_roots(c.ctx, ptrs.data(), ptrs.size(), fmt(o), &s.s);
    if (st != DYN_OK) return fail(c, st);
    if (*s.s) print(s.s);
    return kExitOk;
  }
  if (cmd == "sweep") {
    std::ifstream in(o.grid);
    if (!in) {
      std::cerr << "error: cannot read grid file '" << o.grid << "'\n";
      return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    unsigned checks = 0;
    for (const auto& k : o.checks) {
      if (k == "cycles") checks |= DYN_CHECK_CYCLES;
      else if (k == "preper") checks |= DYN_CHECK_PREPER;
      else if (k == "pairs") checks |= DYN_CHECK_PAIRS;
      else if (k == "rational") checks |= DYN_CHECK_RATIONAL;
      else if (k == "all") checks |= DYN_CHECK_ALL;
    }
    if (checks == 0) checks = DYN_CHECK_ALL;
    std::size_t seen = 0;
    dyn_report* rep = nullptr;
    st = dyn_sweep(c.ctx, buf.str().c_str(), checks, o.jobs, o.verbose ? on_record : nullptr, &seen, &rep);
    if (st != DYN_OK) return fail(c, st);
    std::unique_ptr<dyn_report, decltype(&dyn_report_destroy)> guard(rep, dyn_report_destroy);
    if (!o.out.empty()) {
      Owned jsonl, csv;
      if ((st = dyn_report_jsonl(c.ctx, rep, &jsonl.s)) != DYN_OK) return fail(c, st);
      if ((st = dyn_report_csv(c.ctx, rep, &csv.s)) != DYN_OK) return fail(c, st);
      std::ofstream fj(o.out + ".jsonl"), fc(o.out + ".csv");
      fj << jsonl.s;
      fc << csv.s;
      if (!fj || !fc) {
        std::cerr << "error: cannot write report files with prefix '" << o.out << "'\n";
        return kExitFailure;
      }
    }
    Owned summary, viol;
    if ((st = dyn_report_summary_json(c.ctx, rep, &summary.s)) != DYN_OK) return fail(c, st);
    if (fmt(o) == DYN_FORMAT_JSON) {
      print(summary.s);
    } else {
      const auto j = nlohmann::json::parse(summary.s);
      std::cout << "records=" << j["records"] << "\nmax_cycle_length=" << j["max_cycle_length"]
                << "\nmax_preper_count=" << j["max_preper_count"]
                << "\nmax_preper_count_gated=" << j["max_preper_count_gated"]
                << "\npplemma_pairs=" << j["pplemma_pairs"] << "\nremark_exceptions=" << j["remark_exceptions"]
                << "\nviolations=" << j["violations"].size() << "\n";
      if ((st = dyn_report_violations(c.ctx, rep, &viol.s)) != DYN_OK) return fail(c, st);
      std::cout << viol.s;
    }
    return dyn_report_violation_count(rep) == 0 ? kExitOk : kExitViolation;
  }

  // Commands on a map.
  const bool has_p = sub.get_option("--p")->count() > 0;
  if (!has_p && (sub.get_option("--e")->count() || sub.get_option("--sigma")->count())) {
    std::cerr << "error: --e and --sigma require --p\n";
    return kExitUsage;
  }
  if (!has_p && o.b.empty()) {
    std::cerr << "error: --b or --p is required\n";
    return kExitUsage;
  }
  dyn_map* raw = nullptr;
  st = has_p ? dyn_map_create_p(c.ctx, o.d, o.a.c_str(), o.b.empty() ? nullptr : o.b.c_str(), o.p.c_str(), o.e,
                                o.sigma, &raw)
             : dyn_map_create(c.ctx, o.d, o.a.c_str(), o.b.c_str(), &raw);
  if (st != DYN_OK) return fail(c, st);
  std::unique_ptr<dyn_map, decltype(&dyn_map_destroy)> map(raw, dyn_map_destroy);
  if (o.verbose) {
    Owned label;
    if (dyn_map_label(c.ctx, map.get(), &label.s) == DYN_OK) std::cerr << label.s << "\n";
  }
  if (cmd == "portrait") {
    dyn_portrait_limits lim;
    dyn_portrait_limits_init(&lim);
    lim.n_max = o.n_max;
    lim.depth = o.depth;
    lim.node_budget = o.node_budget;
    lim.max_iter = o.max_iter;
    lim.height_bits_cap = o.height_bits_cap;
    st = dyn_portrait(c.ctx, map.get(), &lim, fmt(o), &s.s);
  } else if (cmd == "orbit") {
    st = dyn_orbit(c.ctx, map.get(), o.z.c_str(), o.max_iter, o.height_bits_cap, fmt(o), &s.s);
  } else {
    st = dyn_preimages(c.ctx, map.get(), o.t.c_str(), fmt(o), &s.s);
  }
  if (st != DYN_OK) return fail(c, st);
  if (*s.s || fmt(o) == DYN_FORMAT_JSON) print(s.s);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynatomic forms and rational preperiodic portraits of z -> z/(a z^d + b)"};
  app.require_subcommand(1, 1);
  Options o;
  o.jobs = default_jobs();

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--verbose", o.verbose, "Run details on stderr");
    sub->add_option("--degree-budget", o.degree_budget, "Largest homogeneous degree allowed");
  };
  auto add_dn = [&](CLI::App* sub, unsigned min_n) {
    sub->add_option("--d", o.d, "Degree d >= 2")->required()->check(CLI::Range(2u, 1000u));
    sub->add_option("--n", o.n, "Period n")->required()->check(CLI::Range(min_n, 64u));
    add_format(sub);
  };
  auto add_map = [&](CLI::App* sub) {
    sub->add_option("--d", o.d, "Degree d >= 2")->required()->check(CLI::Range(2u, 1000u));
    sub->add_option("--a", o.a, "Nonzero rational a")->required();
    sub->add_option("--b", o.b, "Nonzero rational b");
    sub->add_option("--p", o.p, "Prime p with b = sigma p^e");
    sub->add_option("--e", o.e, "Exponent e >= 0");
    sub->add_option("--sigma", o.sigma, "Sign of b")->check(CLI::IsMember({1, -1}));
    add_format(sub);
  };

  add_dn(app.add_subcommand("dynatomic", "Plain dynatomic form in X, Y over Z[a, b]"), 1);
  add_dn(app.add_subcommand("tilde", "Tilde dynatomic form in x, y over Z[b]"), 1);
  add_dn(app.add_subcommand("verify-lemma1", "Check the substitution identity between the two forms (n > 1)"), 2);
  add_dn(app.add_subcommand("verify-lemma2", "Edge coefficients of the tilde form"), 1);

  auto* portrait = app.add_subcommand("portrait", "Rational preperiodic portrait");
  add_map(portrait);
  portrait->add_option("--n-max", o.n_max, "Largest period searched through the tilde form");
  portrait->add_option("--depth", o.depth, "Backward search depth");
  portrait->add_option("--node-budget", o.node_budget, "Largest portrait explored");
  portrait->add_option("--max-iter", o.max_iter, "Orbit iteration budget");
  portrait->add_option("--height-bits-cap", o.height_bits_cap, "Height in bits treated as escape");

  auto* orbit = app.add_subcommand("orbit", "Classify the forward orbit of a point");
  add_map(orbit);
  orbit->add_option("--z", o.z, "Start point, rational or inf")->required();
  orbit->add_option("--max-iter", o.max_iter, "Orbit iteration budget");
  orbit->add_option("--height-bits-cap", o.height_bits_cap, "Height in bits treated as escape");

  auto* pre = app.add_subcommand("preimages", "Rational preimages of a point");
  add_map(pre);
  pre->add_option("--t", o.t, "Target point, rational or inf")->required();

  auto* newton = app.add_subcommand("newton", "Newton polygon of a polynomial at a prime");
  newton->add_option("--coeffs", o.coeffs, "Ascending coefficients c0,c1,...")->required();
  newton->add_option("--p", o.p, "Prime")->required();
  add_format(newton);

  auto* roots = app.add_subcommand("roots", "Rational roots of a polynomial");
  roots->add_option("--coeffs", o.coeffs, "Ascending coefficients c0,c1,...")->required();
  add_format(roots);

  auto* sweep = app.add_subcommand("sweep", "Bounded-height certification sweep over a parameter grid");
  sweep->add_option("--grid", o.grid, "Grid description file")->required();
  sweep->add_option("--jobs", o.jobs, "Worker threads, 0 for all cores (default from DYNATOMIC_JOBS)");
  sweep->add_option("--out", o.out, "Write <prefix>.jsonl and <prefix>.csv");
  sweep->add_option("--checks", o.checks, "Subset of cycles, preper, pairs, rational, all")
      ->delimiter(',')
      ->check(CLI::IsMember({"cycles", "preper", "pairs", "rational", "all"}));
  add_format(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (auto nl = msg.find('\n'); nl != std::string::npos) msg.resize(nl);
    std::cerr << "error: " << msg << "\n";
    return kExitUsage;
  }
  try {
    return run(*app.get_subcommands().front(), o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

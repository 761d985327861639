#include "dynatomic/dynatomic.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <streambuf>
#include <ostream>

#include "dynatomic.hpp"
#include "harness.hpp"
#include "padic.hpp"
#include "polynomial.hpp"

struct dyn_context {
  std::string last_error;
};

struct dyn_map {
  dyn::MapParams params;
};

struct dyn_report {
  dyn::Report report;
};

namespace {

using dyn::BigInt;
using dyn::BigRat;

dyn_status code_of(dyn::ErrorCode c) {
  switch (c) {
    case dyn::ErrorCode::argument: return DYN_E_ARGUMENT;
    case dyn::ErrorCode::inexact_division: return DYN_E_INEXACT_DIVISION;
    case dyn::ErrorCode::budget_exceeded: return DYN_E_BUDGET;
    case dyn::ErrorCode::parse: return DYN_E_PARSE;
    case dyn::ErrorCode::io: return DYN_E_IO;
    case dyn::ErrorCode::internal: break;
  }
  return DYN_E_INTERNAL;
}

template <class F>
dyn_status guarded(dyn_context* ctx, F&& body) {
  if (!ctx) return DYN_E_NULL;
  ctx->last_error.clear();
  try {
    body();
    return DYN_OK;
  } catch (const dyn::Error& e) {
    ctx->last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return DYN_E_BUDGET;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return DYN_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw dyn::ArgumentError(std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  require(out, "output pointer");
  *out = dup(s);
}

std::string render(const nlohmann::ordered_json& j) { return j.dump(); }

dyn::RatPoly poly_from(const char* const* coeffs, size_t count) {
  if (count == 0) throw dyn::ArgumentError("a polynomial needs at least one coefficient");
  require(coeffs, "coefficients");
  std::vector<BigRat> c;
  c.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    require(coeffs[i], "coefficient");
    c.push_back(dyn::parse_rational(coeffs[i]));
  }
  return dyn::RatPoly(std::move(c));
}

BigInt prime_from(const char* p) {
  require(p, "prime");
  BigRat q = dyn::parse_rational(p);
  if (q.get_den() != 1) throw dyn::ArgumentError("prime must be an integer");
  return q.get_num();
}

// Forwards each completed line to the record callback.
class LineSink : public std::streambuf {
public:
  LineSink(dyn_record_callback cb, void* user) : cb_(cb), user_(user) {}

protected:
  int_type overflow(int_type ch) override {
    if (ch == traits_type::eof()) return traits_type::not_eof(ch);
    if (ch == '\n') {
      cb_(line_.c_str(), user_);
      line_.clear();
    } else {
      line_.push_back(static_cast<char>(ch));
    }
    return ch;
  }

private:
  dyn_record_callback cb_;
  void* user_;
  std::string line_;
};

} // namespace

extern "C" {

const char* dyn_version(void) { return "0.1.0"; }

const char* dyn_status_name(dyn_status status) {
  switch (status) {
    case DYN_OK: return "ok";
    case DYN_E_ARGUMENT: return "argument error";
    case DYN_E_INEXACT_DIVISION: return "inexact division";
    case DYN_E_BUDGET: return "budget exceeded";
    case DYN_E_INTERNAL: return "internal error";
    case DYN_E_PARSE: return "parse error";
    case DYN_E_IO: return "i/o error";
    case DYN_E_NULL: return "null handle";
  }
  return "unknown status";
}

dyn_status dyn_context_create(dyn_context** out) {
  if (!out) return DYN_E_NULL;
  *out = new (std::nothrow) dyn_context();
  return *out ? DYN_OK : DYN_E_BUDGET;
}

void dyn_context_destroy(dyn_context* ctx) { delete ctx; }

const char* dyn_last_error(const dyn_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

void dyn_string_free(char* s) { std::free(s); }

dyn_status dyn_set_degree_budget(dyn_context* ctx, unsigned long long budget) {
  return guarded(ctx, [&] {
    if (budget > 0xffffffffULL) throw dyn::ArgumentError("degree budget too large");
    dyn::set_degree_budget(static_cast<unsigned>(budget));
  });
}

dyn_status dyn_nu(dyn_context* ctx, unsigned d, unsigned n, char** out) {
  return guarded(ctx, [&] { emit(out, std::to_string(dyn::nu(d, n))); });
}

dyn_status dyn_dynatomic_text(dyn_context* ctx, unsigned d, unsigned n, char** out) {
  return guarded(ctx, [&] { emit(out, dyn::to_text(dyn::dynatomic(d, n), "X", "Y")); });
}

dyn_status dyn_tilde_dynatomic_text(dyn_context* ctx, unsigned d, unsigned n, char** out) {
  return guarded(ctx, [&] { emit(out, dyn::to_text(*dyn::tilde_dynatomic(d, n))); });
}

dyn_status dyn_verify_lemma1(dyn_context* ctx, unsigned d, unsigned n, int* holds) {
  return guarded(ctx, [&] {
    require(holds, "result pointer");
    *holds = dyn::verify_lemma1(d, n) ? 1 : 0;
  });
}

dyn_status dyn_verify_bridge(dyn_context* ctx, unsigned d, unsigned n, int* holds) {
  return guarded(ctx, [&] {
    require(holds, "result pointer");
    *holds = dyn::verify_bridge(d, n) ? 1 : 0;
  });
}

dyn_status dyn_edge_coeffs(dyn_context* ctx, unsigned d, unsigned n, dyn_format format, char** out, int* holds) {
  return guarded(ctx, [&] {
    const dyn::EdgeCoeffs ec = dyn::edge_coeffs(d, n);
    if (holds) *holds = ec.holds ? 1 : 0;
    if (!out) return;
    if (format == DYN_FORMAT_JSON) {
      nlohmann::ordered_json j;
      j["d"] = d;
      j["n"] = n;
      j["nu"] = dyn::nu(d, n);
      j["low"] = dyn::to_text(ec.low);
      j["high"] = dyn::to_text(ec.high);
      j["exponent"] = ec.exponent;
      j["holds"] = ec.holds;
      emit(out, render(j));
    } else {
      emit(out, "low=" + dyn::to_text(ec.low) + "\nhigh=" + dyn::to_text(ec.high) +
                    "\nexponent=" + std::to_string(ec.exponent) + "\n" + (ec.holds ? "OK" : "FAIL"));
    }
  });
}

dyn_status dyn_map_create(dyn_context* ctx, unsigned d, const char* a, const char* b, dyn_map** out) {
  return guarded(ctx, [&] {
    require(a, "a");
    require(b, "b");
    require(out, "output pointer");
    *out = new dyn_map{dyn::MapParams(d, dyn::parse_rational(a), dyn::parse_rational(b))};
  });
}

dyn_status dyn_map_create_p(dyn_context* ctx, unsigned d, const char* a, const char* b, const char* p, unsigned e,
                            int sigma, dyn_map** out) {
  return guarded(ctx, [&] {
    require(a, "a");
    require(out, "output pointer");
    dyn::PParam ps(prime_from(p), e, sigma);
    const BigRat av = dyn::parse_rational(a);
    *out = b ? new dyn_map{dyn::MapParams(d, av, dyn::parse_rational(b), ps)}
             : new dyn_map{dyn::MapParams::with_pspec(d, av, ps)};
  });
}

void dyn_map_destroy(dyn_map* map) { delete map; }

dyn_status dyn_map_label(dyn_context* ctx, const dyn_map* map, char** out) {
  return guarded(ctx, [&] {
    require(map, "map");
    emit(out, map->params.label());
  });
}

dyn_status dyn_map_apply(dyn_context* ctx, const dyn_map* map, const char* z, char** out) {
  return guarded(ctx, [&] {
    require(map, "map");
    require(z, "point");
    emit(out, dyn::apply(map->params, dyn::ProjPoint::parse(z)).to_string());
  });
}

dyn_status dyn_orbit(dyn_context* ctx, const dyn_map* map, const char* z, unsigned max_iter,
                     unsigned height_bits_cap, dyn_format format, char** out) {
  return guarded(ctx, [&] {
    require(map, "map");
    require(z, "point");
    if (max_iter == 0) max_iter = dyn::kDefaultMaxIter;
    if (height_bits_cap == 0) height_bits_cap = dyn::kDefaultHeightBitsCap;
    const dyn::ProjPoint start = dyn::ProjPoint::parse(z);
    const dyn::OrbitClass oc = dyn::orbit_classify(map->params, start, max_iter, height_bits_cap);
    emit(out, format == DYN_FORMAT_JSON ? render(dyn::to_json(oc, start)) : dyn::to_text(oc));
  });
}

dyn_status dyn_preimages(dyn_context* ctx, const dyn_map* map, const char* t, dyn_format format, char** out) {
  return guarded(ctx, [&] {
    require(map, "map");
    require(t, "point");
    const dyn::ProjPoint target = dyn::ProjPoint::parse(t);
    const auto pre = dyn::preimages(map->params, target);
    if (format == DYN_FORMAT_JSON) {
      nlohmann::ordered_json j;
      j["target"] = target.to_string();
      auto arr = nlohmann::ordered_json::array();
      for (const auto& q : pre) arr.push_back(q.to_string());
      j["preimages"] = std::move(arr);
      emit(out, render(j));
    } else {
      std::string s;
      for (const auto& q : pre) s += q.to_string() + "\n";
      emit(out, s);
    }
  });
}

void dyn_portrait_limits_init(dyn_portrait_limits* limits) {
  if (!limits) return;
  const dyn::PortraitLimits def;
  limits->n_max = def.n_max;
  limits->depth = def.depth;
  limits->node_budget = def.node_budget;
  limits->max_iter = def.max_iter;
  limits->height_bits_cap = def.height_bits_cap;
}

dyn_status dyn_portrait(dyn_context* ctx, const dyn_map* map, const dyn_portrait_limits* limits, dyn_format format,
                        char** out) {
  return guarded(ctx, [&] {
    require(map, "map");
    dyn::PortraitLimits lim;
    if (limits) {
      lim.n_max = limits->n_max;
      lim.depth = limits->depth;
      lim.node_budget = limits->node_budget;
      lim.max_iter = limits->max_iter;
      lim.height_bits_cap = limits->height_bits_cap;
    }
    const dyn::Portrait P = dyn::portrait(map->params, lim);
    emit(out, format == DYN_FORMAT_JSON ? render(dyn::to_json(P)) : dyn::to_text(P));
  });
}

dyn_status dyn_newton_polygon(dyn_context* ctx, const char* const* coeffs, size_t count, const char* p,
                              dyn_format format, char** out) {
  return guarded(ctx, [&] {
    const dyn::RatPoly f = poly_from(coeffs, count);
    const dyn::NewtonPolygon np = dyn::newton_polygon(f, prime_from(p));
    if (format == DYN_FORMAT_JSON) {
      nlohmann::ordered_json j;
      j["prime"] = dyn::to_string(np.prime);
      auto verts = nlohmann::ordered_json::array();
      for (const auto& [i, v] : np.vertices) verts.push_back({i, v});
      j["vertices"] = std::move(verts);
      auto segs = nlohmann::ordered_json::array();
      for (const auto& s : np.segments) {
        nlohmann::ordered_json sj;
        sj["slope"] = dyn::to_string(s.slope);
        sj["length"] = s.length;
        segs.push_back(std::move(sj));
      }
      j["segments"] = std::move(segs);
      emit(out, render(j));
    } else {
      emit(out, dyn::to_text(np));
    }
  });
}

dyn_status dyn_rational_roots(dyn_context* ctx, const char* const* coeffs, size_t count, dyn_format format,
                              char** out) {
  return guarded(ctx, [&] {
    const auto roots = dyn::rational_roots(poly_from(coeffs, count), std::nullopt);
    if (format == DYN_FORMAT_JSON) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : roots) arr.push_back(dyn::to_string(r));
      nlohmann::ordered_json j;
      j["roots"] = std::move(arr);
      emit(out, render(j));
    } else {
      std::string s;
      for (const auto& r : roots) s += dyn::to_string(r) + "\n";
      emit(out, s);
    }
  });
}

dyn_status dyn_sweep(dyn_context* ctx, const char* grid_text, unsigned checks, unsigned jobs,
                     dyn_record_callback callback, void* user, dyn_report** out) {
  return guarded(ctx, [&] {
    require(grid_text, "grid text");
    require(out, "output pointer");
    if (checks == 0 || (checks & ~static_cast<unsigned>(DYN_CHECK_ALL)) != 0) {
      throw dyn::ArgumentError("invalid check mask");
    }
    const dyn::GridSpec grid = dyn::parse_grid(grid_text);
    dyn_report* rep = new dyn_report;
    try {
      if (callback) {
        LineSink sink(callback, user);
        std::ostream os(&sink);
        rep->report = dyn::run_sweep(grid, checks, jobs, &os);
      } else {
        rep->report = dyn::run_sweep(grid, checks, jobs, nullptr);
      }
    } catch (...) {
      delete rep;
      throw;
    }
    *out = rep;
  });
}

void dyn_report_destroy(dyn_report* report) { delete report; }

size_t dyn_report_record_count(const dyn_report* report) { return report ? report->report.records.size() : 0; }

size_t dyn_report_violation_count(const dyn_report* report) {
  return report ? report->report.violations.size() : 0;
}

dyn_status dyn_report_summary_json(dyn_context* ctx, const dyn_report* report, char** out) {
  return guarded(ctx, [&] {
    require(report, "report");
    emit(out, render(report->report.summary_json()));
  });
}

dyn_status dyn_report_jsonl(dyn_context* ctx, const dyn_report* report, char** out) {
  return guarded(ctx, [&] {
    require(report, "report");
    emit(out, report->report.to_jsonl());
  });
}

dyn_status dyn_report_csv(dyn_context* ctx, const dyn_report* report, char** out) {
  return guarded(ctx, [&] {
    require(report, "report");
    emit(out, report->report.to_csv());
  });
}

dyn_status dyn_report_violations(dyn_context* ctx, const dyn_report* report, char** out) {
  return guarded(ctx, [&] {
    require(report, "report");
    std::string s;
    for (const auto& v : report->report.violations) s += v + "\n";
    emit(out, s);
  });
}

} // extern "C"

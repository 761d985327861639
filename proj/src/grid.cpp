#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "harness.hpp"

namespace dyn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "[1, 2, 3]", "lo..hi" or a single scalar into scalar tokens.
std::vector<std::string> tokens(std::string_view value, const std::string& key) {
  value = trim(value);
  std::vector<std::string> out;
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') throw ParseError("unterminated list for '" + key + "'");
    value = value.substr(1, value.size() - 2);
    std::size_t start = 0;
    while (start <= value.size()) {
      std::size_t comma = value.find(',', start);
      if (comma == std::string_view::npos) comma = value.size();
      auto item = trim(value.substr(start, comma - start));
      if (!item.empty()) out.emplace_back(item);
      start = comma + 1;
    }
    return out;
  }
  if (auto dots = value.find(".."); dots != std::string_view::npos) {
    long lo = std::stol(std::string(trim(value.substr(0, dots))));
    long hi = std::stol(std::string(trim(value.substr(dots + 2))));
    if (hi < lo) throw ParseError("empty range for '" + key + "'");
    for (long v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
    return out;
  }
  out.emplace_back(value);
  return out;
}

unsigned long to_unsigned(const std::string& s, const std::string& key) {
  BigRat q = parse_rational(s);
  if (q.get_den() != 1 || q < 0 || !q.get_num().fits_ulong_p()) {
    throw ParseError("'" + key + "' expects nonnegative integers, got '" + s + "'");
  }
  return q.get_num().get_ui();
}

} // namespace

GridSpec parse_grid(std::string_view text) {
  GridSpec g;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    std::string_view s = trim(std::string_view(line).substr(0, hash));
    if (s.empty() || s.front() == '[') {
      if (!s.empty() && s.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": bad section header");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key(trim(s.substr(0, eq)));
    std::vector<std::string> vals;
    try {
      vals = tokens(s.substr(eq + 1), key);
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(lineno) + ": malformed value for '" + key + "'");
    }
    if (vals.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    auto scalar = [&]() -> unsigned long {
      if (vals.size() != 1) throw ParseError("'" + key + "' expects a single value");
      return to_unsigned(vals.front(), key);
    };
    if (key == "d") {
      g.d_values.clear();
      for (const auto& v : vals) {
        auto d = to_unsigned(v, key);
        if (d < 2) throw ParseError("d values must be at least 2");
        g.d_values.push_back(static_cast<unsigned>(d));
      }
    } else if (key == "a_bound") {
      g.a_bound = static_cast<unsigned>(scalar());
    } else if (key == "a") {
      g.a_values.clear();
      for (const auto& v : vals) {
        BigRat a = parse_rational(v);
        if (a == 0) throw ParseError("a values must be nonzero");
        g.a_values.push_back(a);
      }
    } else if (key == "primes" || key == "p") {
      g.primes.clear();
      for (const auto& v : vals) {
        auto p = to_unsigned(v, key);
        if (!is_prime(BigInt(p))) throw ParseError(v + " is not prime");
        g.primes.push_back(p);
      }
    } else if (key == "e") {
      g.e_values.clear();
      for (const auto& v : vals) g.e_values.push_back(static_cast<unsigned>(to_unsigned(v, key)));
    } else if (key == "signs" || key == "sigma") {
      g.signs.clear();
      for (const auto& v : vals) {
        if (v != "1" && v != "+1" && v != "-1") throw ParseError("signs must be +1 or -1");
        g.signs.push_back(v == "-1" ? -1 : 1);
      }
    } else if (key == "composite_b") {
      g.composite_b.clear();
      for (const auto& v : vals) {
        BigRat b = parse_rational(v);
        if (b == 0 || b.get_den() != 1) throw ParseError("composite_b values must be nonzero integers");
        g.composite_b.push_back(b.get_num());
      }
    } else if (key == "height" || key == "H") {
      g.height = static_cast<unsigned>(scalar());
    } else if (key == "max_iter") {
      g.max_iter = static_cast<unsigned>(scalar());
    } else if (key == "height_bits_cap") {
      g.height_bits_cap = static_cast<unsigned>(scalar());
    } else if (key == "depth") {
      g.depth = static_cast<unsigned>(scalar());
    } else if (key == "n_max") {
      g.n_max = static_cast<unsigned>(scalar());
    } else if (key == "node_budget") {
      g.node_budget = scalar();
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (g.height < 1 || g.max_iter < 1 || g.height_bits_cap < 1 || g.a_bound < 1) {
    throw ParseError("grid bounds must be positive");
  }
  return g;
}

std::vector<BigRat> enumerate_a(unsigned bound) {
  std::vector<BigRat> out;
  for (unsigned s = 1; s <= bound; ++s) {
    for (unsigned r = 1; r <= bound; ++r) {
      if (std::gcd(r, s) != 1) continue;
      out.emplace_back(BigInt(r), BigInt(s));
      out.emplace_back(BigInt(-static_cast<long>(r)), BigInt(s));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MapParams> grid_points(const GridSpec& grid) {
  const std::vector<BigRat> as = grid.a_values.empty() ? enumerate_a(grid.a_bound) : grid.a_values;
  // One PParam per distinct b; b = +-1 keeps the first prime listed.
  std::map<BigInt, std::optional<PParam>> bs;
  for (auto p : grid.primes) {
    for (auto e : grid.e_values) {
      for (int s : grid.signs) {
        PParam pp(BigInt(p), e, s);
        bs.try_emplace(pp.value(), pp);
      }
    }
  }
  for (const auto& b : grid.composite_b) bs.try_emplace(b, std::nullopt);

  std::set<unsigned> ds(grid.d_values.begin(), grid.d_values.end());
  std::set<BigRat> a_set(as.begin(), as.end());
  std::vector<MapParams> out;
  for (unsigned d : ds) {
    for (const auto& a : a_set) {
      for (const auto& [b, pspec] : bs) out.emplace_back(d, a, BigRat(b), pspec);
    }
  }
  return out;
}

} // namespace dyn

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dynamics.hpp"
#include "numbers.hpp"
#include "polynomial.hpp"

namespace test {

inline dyn::BigRat Q(const char* s) { return dyn::parse_rational(s); }
inline dyn::BigInt Z(long v) { return dyn::BigInt(v); }
inline dyn::ProjPoint P(const char* s) { return dyn::ProjPoint::parse(s); }

inline dyn::RatPoly poly(std::initializer_list<long> ascending) {
  std::vector<dyn::BigRat> c;
  for (long v : ascending) c.emplace_back(v);
  return dyn::RatPoly(std::move(c));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string golden(const std::string& name) { return read_file(std::string(DYN_GOLDEN_DIR) + "/" + name); }

} // namespace test

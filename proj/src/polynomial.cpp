#include "polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace dyn {

namespace {
std::atomic<unsigned> g_degree_budget{kDefaultDegreeBudget};
}

unsigned degree_budget() { return g_degree_budget.load(std::memory_order_relaxed); }

void set_degree_budget(unsigned budget) {
  g_degree_budget.store(budget == 0 ? kDefaultDegreeBudget : budget, std::memory_order_relaxed);
}

// ---------------------------------------------------------------- MultiPoly

MultiPoly MultiPoly::constant(const BigInt& c, VarSet vars) {
  MultiPoly p(vars);
  if (c != 0) p.terms_.emplace_back(Monomial{}, c);
  return p;
}

MultiPoly MultiPoly::term(const BigInt& c, Monomial m, VarSet vars) {
  if ((m.a > 0 && !contains_a(vars)) || (m.b > 0 && !contains_b(vars))) {
    throw ArgumentError("monomial uses a variable outside the polynomial's variable set");
  }
  MultiPoly p(vars);
  if (c != 0) p.terms_.emplace_back(m, c);
  return p;
}

MultiPoly MultiPoly::a() { return term(1, {1, 0}, VarSet::ab); }
MultiPoly MultiPoly::b() { return term(1, {0, 1}, VarSet::b); }

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().first == Monomial{});
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  vars_ = vars_ | o.vars_;
  if (o.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() || j != o.terms_.end()) {
    if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
      merged.push_back(std::move(*i++));
    } else if (i == terms_.end() || j->first < i->first) {
      merged.push_back(*j++);
    } else {
      BigInt c = i->second + j->second;
      if (c != 0) merged.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

template <bool Subtract>
void MultiPoly::accumulate(const MultiPoly& f, const MultiPoly& g) {
  vars_ = vars_ | f.vars_ | g.vars_;
  if (f.terms_.empty() || g.terms_.empty()) return;
  for (const auto& [mf, cf] : f.terms_) {
    for (const auto& [mg, cg] : g.terms_) {
      const Monomial m = mf * mg;
      auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                 [](const Term& t, const Monomial& key) { return t.first < key; });
      if (it != terms_.end() && it->first == m) {
        if constexpr (Subtract) {
          mpz_submul(it->second.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
        } else {
          mpz_addmul(it->second.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
        }
      } else {
        BigInt c = cf * cg;
        if constexpr (Subtract) c = -c;
        terms_.emplace(it, m, std::move(c));
      }
    }
  }
  drop_zeros();
}

void MultiPoly::add_mul(const MultiPoly& f, const MultiPoly& g) { accumulate<false>(f, g); }
void MultiPoly::sub_mul(const MultiPoly& f, const MultiPoly& g) { accumulate<true>(f, g); }

void MultiPoly::drop_zeros() {
  std::erase_if(terms_, [](const Term& t) { return t.second == 0; });
}

MultiPoly operator*(const MultiPoly& l, const MultiPoly& r) {
  MultiPoly out(l.vars() | r.vars());
  out.add_mul(l, r);
  return out;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly result = constant(1, vars_);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::exact_div(const MultiPoly& g) const {
  if (g.is_zero()) throw ArgumentError("division by the zero polynomial");
  MultiPoly q(vars_ | g.vars_);
  MultiPoly rem = *this;
  const auto& [lead_m, lead_c] = g.terms_.back();
  while (!rem.is_zero()) {
    const auto& [rm, rc] = rem.terms_.back();
    if (!lead_m.divides(rm) || !mpz_divisible_p(rc.get_mpz_t(), lead_c.get_mpz_t())) {
      throw InexactDivisionError("polynomial division leaves a remainder");
    }
    MultiPoly t(q.vars_);
    BigInt c;
    mpz_divexact(c.get_mpz_t(), rc.get_mpz_t(), lead_c.get_mpz_t());
    t.terms_.emplace_back(Monomial{rm.a - lead_m.a, rm.b - lead_m.b}, std::move(c));
    rem.sub_mul(t, g);
    q += t;
  }
  return q;
}

BigRat rpow(const BigRat& q, unsigned long k) {
  BigRat r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), k);
  return r;
}

BigRat MultiPoly::evaluate(const ParamBindings& bindings) const {
  if (contains_a(vars_) && !bindings.a) throw ArgumentError("variable a is unbound");
  if (contains_b(vars_) && !bindings.b) throw ArgumentError("variable b is unbound");
  BigRat sum = 0;
  for (const auto& [m, c] : terms_) {
    BigRat t = c;
    if (m.a > 0) t *= rpow(*bindings.a, m.a);
    if (m.b > 0) t *= rpow(*bindings.b, m.b);
    sum += t;
  }
  return sum;
}

BigRat specialize(const MultiPoly& f, const ParamBindings& bindings) { return f.evaluate(bindings); }

// ---------------------------------------------------------------- HomBiPoly

HomBiPoly::HomBiPoly(unsigned degree, VarSet vars) : vars_(vars) {
  if (degree > degree_budget()) {
    throw BudgetExceededError("homogeneous degree " + std::to_string(degree) + " exceeds the degree budget");
  }
  coeffs_.assign(static_cast<std::size_t>(degree) + 1, MultiPoly(vars));
}

HomBiPoly HomBiPoly::x() { return monomial(1, 1, MultiPoly::constant(1)); }
HomBiPoly HomBiPoly::y() { return monomial(1, 0, MultiPoly::constant(1)); }

HomBiPoly HomBiPoly::monomial(unsigned degree, unsigned i, const MultiPoly& c) {
  if (i > degree) throw ArgumentError("monomial index exceeds degree");
  HomBiPoly p(degree, c.vars());
  p.coeffs_[i] = c;
  return p;
}

void HomBiPoly::set_coeff(unsigned i, MultiPoly c) {
  vars_ = vars_ | c.vars();
  coeffs_.at(i) = std::move(c);
}

bool HomBiPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const MultiPoly& c) { return c.is_zero(); });
}

std::optional<std::pair<unsigned, unsigned>> HomBiPoly::support() const {
  std::optional<unsigned> lo, hi;
  for (unsigned i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (!lo) lo = i;
    hi = i;
  }
  if (!lo) return std::nullopt;
  return std::pair{*lo, *hi};
}

HomBiPoly HomBiPoly::operator-() const {
  HomBiPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

HomBiPoly& HomBiPoly::operator+=(const HomBiPoly& o) {
  if (degree() != o.degree()) {
    throw ArgumentError("cannot add forms of degree " + std::to_string(degree()) + " and " +
                        std::to_string(o.degree()));
  }
  vars_ = vars_ | o.vars_;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

HomBiPoly& HomBiPoly::operator-=(const HomBiPoly& o) {
  if (degree() != o.degree()) {
    throw ArgumentError("cannot subtract forms of degree " + std::to_string(degree()) + " and " +
                        std::to_string(o.degree()));
  }
  vars_ = vars_ | o.vars_;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

HomBiPoly operator*(const HomBiPoly& l, const HomBiPoly& r) {
  HomBiPoly out(l.degree() + r.degree(), l.vars_ | r.vars_);
  for (std::size_t i = 0; i < l.coeffs_.size(); ++i) {
    if (l.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < r.coeffs_.size(); ++j) {
      if (r.coeffs_[j].is_zero()) continue;
      out.coeffs_[i + j].add_mul(l.coeffs_[i], r.coeffs_[j]);
    }
  }
  return out;
}

HomBiPoly HomBiPoly::scaled(const MultiPoly& c) const {
  HomBiPoly out(degree(), vars_ | c.vars());
  if (c.is_zero()) return out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!coeffs_[i].is_zero()) out.coeffs_[i] = coeffs_[i] * c;
  }
  return out;
}

HomBiPoly HomBiPoly::shifted(unsigned i, unsigned j) const {
  HomBiPoly out(degree() + i + j, vars_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out.coeffs_[k + i] = coeffs_[k];
  return out;
}

HomBiPoly HomBiPoly::pow(unsigned k) const {
  HomBiPoly result = monomial(0, 0, MultiPoly::constant(1, vars_));
  HomBiPoly base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

HomBiPoly HomBiPoly::exact_div(const HomBiPoly& g) const {
  auto gs = g.support();
  if (!gs) throw ArgumentError("division by the zero form");
  if (degree() < g.degree()) {
    if (is_zero()) throw ArgumentError("quotient degree would be negative");
    throw InexactDivisionError("dividend degree is below divisor degree");
  }
  const unsigned qdeg = degree() - g.degree();
  const auto [glo, ghi] = *gs;
  HomBiPoly q(qdeg, vars_ | g.vars_);
  std::vector<MultiPoly> rem = coeffs_;
  const MultiPoly& lead = g.coeffs_[ghi];
  for (unsigned k = qdeg + 1; k-- > 0;) {
    MultiPoly& top = rem[k + ghi];
    if (top.is_zero()) continue;
    MultiPoly qk = top.exact_div(lead);
    for (unsigned j = glo; j <= ghi; ++j) {
      if (!g.coeffs_[j].is_zero()) rem[k + j].sub_mul(qk, g.coeffs_[j]);
    }
    q.coeffs_[k] = std::move(qk);
  }
  for (const auto& r : rem) {
    if (!r.is_zero()) throw InexactDivisionError("form division leaves a remainder");
  }
  return q;
}

HomBiPoly substitute_pair(const HomBiPoly& f, const HomBiPoly& u, const HomBiPoly& v) {
  if (u.degree() != v.degree()) {
    throw ArgumentError("substitute_pair: substituted forms must have equal degree");
  }
  const unsigned n = f.degree();
  // Horner in homogeneous form: r <- r*u + c_i * v^(n-i).
  HomBiPoly r = HomBiPoly::monomial(0, 0, f.coeff(n));
  HomBiPoly vpow = HomBiPoly::monomial(0, 0, MultiPoly::constant(1));
  for (unsigned i = n; i-- > 0;) {
    vpow = vpow * v;
    r = r * u;
    if (!f.coeff(i).is_zero()) r += vpow.scaled(f.coeff(i));
  }
  return r;
}

RatPoly specialize(const HomBiPoly& f, const ParamBindings& bindings) {
  if (contains_a(f.vars()) && !bindings.a) throw ArgumentError("variable a is unbound");
  if (contains_b(f.vars()) && !bindings.b) throw ArgumentError("variable b is unbound");
  std::vector<BigRat> out;
  out.reserve(f.degree() + 1);
  for (const auto& c : f.coeffs()) out.push_back(c.evaluate(bindings));
  return RatPoly(std::move(out));
}

// ---------------------------------------------------------------- RatPoly

RatPoly::RatPoly(std::vector<BigRat> ascending) : coeffs_(std::move(ascending)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

void RatPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const BigRat& RatPoly::leading() const {
  if (coeffs_.empty()) throw ArgumentError("zero polynomial has no leading coefficient");
  return coeffs_.back();
}

BigRat RatPoly::operator()(const BigRat& w) const {
  BigRat acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
  return acc;
}

RatPoly operator+(const RatPoly& l, const RatPoly& r) {
  std::vector<BigRat> out(std::max(l.coeffs_.size(), r.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = l.coeff(i) + r.coeff(i);
  return RatPoly(std::move(out));
}

RatPoly operator-(const RatPoly& l, const RatPoly& r) {
  std::vector<BigRat> out(std::max(l.coeffs_.size(), r.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = l.coeff(i) - r.coeff(i);
  return RatPoly(std::move(out));
}

RatPoly operator*(const RatPoly& l, const RatPoly& r) {
  if (l.is_zero() || r.is_zero()) return {};
  std::vector<BigRat> out(l.coeffs_.size() + r.coeffs_.size() - 1, BigRat(0));
  for (std::size_t i = 0; i < l.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < r.coeffs_.size(); ++j) out[i + j] += l.coeffs_[i] * r.coeffs_[j];
  }
  return RatPoly(std::move(out));
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& g) const {
  if (g.is_zero()) throw ArgumentError("division by the zero polynomial");
  std::vector<BigRat> rem = coeffs_;
  const int gd = g.degree();
  if (degree() < gd) return {RatPoly{}, *this};
  std::vector<BigRat> q(static_cast<std::size_t>(degree() - gd + 1), BigRat(0));
  for (int k = degree() - gd; k >= 0; --k) {
    BigRat t = rem[static_cast<std::size_t>(k + gd)] / g.leading();
    q[static_cast<std::size_t>(k)] = t;
    for (int j = 0; j <= gd; ++j) rem[static_cast<std::size_t>(k + j)] -= t * g.coeffs_[static_cast<std::size_t>(j)];
  }
  return {RatPoly(std::move(q)), RatPoly(std::move(rem))};
}

std::vector<BigInt> RatPoly::integer_coeffs() const {
  BigInt scale = 1;
  for (const auto& c : coeffs_) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
  std::vector<BigInt> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.get_num() * (scale / c.get_den()));
  return out;
}

bool RatPoly::has_integer_coeffs() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigRat& c) { return c.get_den() == 1; });
}

namespace {

// v^n f(u/v) for integer coefficients, given the powers of v; zero iff u/v is a root.
bool vanishes_at(const std::vector<BigInt>& c, const BigInt& u,
                 const std::vector<BigInt>& vpow) {
  BigInt acc = c.back();
  const std::size_t n = c.size() - 1;
  for (std::size_t i = n; i-- > 0;) {
    acc *= u;
    mpz_addmul(acc.get_mpz_t(), c[i].get_mpz_t(), vpow[n - i].get_mpz_t());
  }
  return acc == 0;
}

} // namespace

std::vector<BigRat> rational_roots(const RatPoly& f, std::optional<std::span<const BigRat>> hint,
                                   const FactorBudget& budget) {
  if (f.is_zero()) throw ArgumentError("rational_roots of the zero polynomial");
  std::vector<BigInt> c = f.integer_coeffs();
  std::set<BigRat> roots;

  if (hint) {
    for (const BigRat& w : *hint) {
      if (f(w) == 0) roots.insert(w);
    }
    return {roots.begin(), roots.end()};
  }

  // Strip powers of w; zero is then a root.
  std::size_t low = 0;
  while (c[low] == 0) ++low;
  if (low > 0) {
    roots.insert(BigRat(0));
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  }
  if (c.size() == 1) return {roots.begin(), roots.end()};

  const auto num_divs = divisors_of(factorize(c.front(), budget));
  const auto den_divs = divisors_of(factorize(c.back(), budget));
  const std::size_t n = c.size() - 1;
  std::vector<BigInt> vpow(n + 1);
  for (const BigInt& v : den_divs) {
    vpow[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) vpow[k] = vpow[k - 1] * v;
    for (const BigInt& u : num_divs) {
      if (gcd(u, v) != 1) continue;
      if (vanishes_at(c, u, vpow)) roots.insert(BigRat(u, v));
      if (vanishes_at(c, BigInt(-u), vpow)) roots.insert(BigRat(BigInt(-u), v));
    }
  }
  return {roots.begin(), roots.end()};
}

// ---------------------------------------------------------------- text

namespace {

struct TextTerm {
  BigInt coeff;
  std::string factors;
};

void append_power(std::string& out, std::string_view name, unsigned long e) {
  if (e == 0) return;
  if (!out.empty()) out += '*';
  out += name;
  if (e > 1) {
    out += '^';
    out += std::to_string(e);
  }
}

std::string render(const std::vector<TextTerm>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms) {
    const bool negative = t.coeff < 0;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    BigInt mag = abs(t.coeff);
    if (t.factors.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += t.factors;
    } else {
      out += mag.get_str();
      out += '*';
      out += t.factors;
    }
  }
  return out;
}

std::string param_factors(const Monomial& m) {
  std::string s;
  append_power(s, "a", m.a);
  append_power(s, "b", m.b);
  return s;
}

} // namespace

std::string to_text(const MultiPoly& f) {
  std::vector<TextTerm> terms;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    terms.push_back({it->second, param_factors(it->first)});
  }
  return render(terms);
}

std::string to_text(const HomBiPoly& f, std::string_view x, std::string_view y) {
  std::vector<TextTerm> terms;
  const unsigned deg = f.degree();
  for (unsigned i = deg + 1; i-- > 0;) {
    const auto& c = f.coeff(i);
    for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it) {
      std::string s = param_factors(it->first);
      append_power(s, x, i);
      append_power(s, y, deg - i);
      terms.push_back({it->second, std::move(s)});
    }
  }
  return render(terms);
}

std::string to_text(const RatPoly& f, std::string_view var) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    const BigRat& c = f.coeffs()[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const bool negative = c < 0;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    BigRat mag = abs(c);
    std::string pw;
    append_power(pw, var, static_cast<unsigned long>(i));
    if (pw.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += pw;
    } else {
      out += to_string(mag) + "*" + pw;
    }
  }
  return out;
}

} // namespace dyn

#include "gpm/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace gpm {

namespace {
constexpr Exponent kMaxExponent = 4096;
constexpr VarIndex kMaxVariable = 1u << 20;
}  // namespace

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

double to_double(const Rational& value) { return value.get_d(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { throw std::invalid_argument("malformed rational '" + s + "'"); };
  if (s.empty()) fail();
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    digits += s[pos++];
    seen_digit = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) fail();
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used == 0 || std::labs(e) > 10000) fail();
    pos += used;
    scale += e;
  }
  if (pos != s.size()) fail();
  mpz_class mantissa(digits.empty() ? "0" : digits, 10);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational r = scale >= 0 ? Rational(mantissa * power) : Rational(mantissa, power);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

// ---------------------------------------------------------------- Exponents

Exponents Exponents::from_pairs(std::vector<Entry> pairs) {
  std::sort(pairs.begin(), pairs.end());
  Exponents out;
  for (const auto& [var, exp] : pairs) {
    if (var == 0) throw std::invalid_argument("variable index must be >= 1");
    if (exp == 0) continue;
    if (!out.entries_.empty() && out.entries_.back().first == var) {
      out.entries_.back().second += exp;
    } else {
      out.entries_.emplace_back(var, exp);
    }
  }
  return out;
}

Exponents Exponents::variable(VarIndex var, Exponent exp) { return from_pairs({{var, exp}}); }

Exponent Exponents::of(VarIndex var) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{var, 0});
  return it != entries_.end() && it->first == var ? it->second : 0;
}

std::uint64_t Exponents::degree() const {
  std::uint64_t d = 0;
  for (const auto& e : entries_) d += e.second;
  return d;
}

VarIndex Exponents::max_var() const { return entries_.empty() ? 0 : entries_.back().first; }

Exponents Exponents::operator*(const Exponents& other) const {
  Exponents out;
  out.entries_.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin(), b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.entries_.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      out.entries_.push_back(*b++);
    } else {
      out.entries_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return out;
}

Exponents Exponents::reduced(VarIndex var, Exponent by) const {
  Exponents out = *this;
  for (auto it = out.entries_.begin(); it != out.entries_.end(); ++it) {
    if (it->first != var) continue;
    if (it->second < by) break;
    it->second -= by;
    if (it->second == 0) out.entries_.erase(it);
    return out;
  }
  throw std::logic_error("exponent reduction below zero");
}

bool grlex_less(const Exponents& a, const Exponents& b) {
  auto da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  // Dense lexicographic comparison, x1 most significant: the first variable where the
  // exponents differ decides.
  auto ea = a.entries(), eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    VarIndex va = i < ea.size() ? ea[i].first : std::numeric_limits<VarIndex>::max();
    VarIndex vb = j < eb.size() ? eb[j].first : std::numeric_limits<VarIndex>::max();
    VarIndex v = std::min(va, vb);
    Exponent xa = va == v ? ea[i].second : 0;
    Exponent xb = vb == v ? eb[j].second : 0;
    if (xa != xb) return xa < xb;
    if (va == v) ++i;
    if (vb == v) ++j;
  }
  return false;
}

// --------------------------------------------------------------- Polynomial

void Polynomial::rebuild(std::map<Exponents, Rational, GrlexLess>&& accum, std::size_t n_vars) {
  terms_.clear();
  degree_ = 0;
  n_vars_ = n_vars;
  for (auto& [exps, coef] : accum) {
    if (coef == 0) continue;
    degree_ = std::max<std::size_t>(degree_, exps.degree());
    n_vars_ = std::max<std::size_t>(n_vars_, exps.max_var());
    terms_.push_back(Monomial{exps, std::move(coef)});
  }
}

Polynomial Polynomial::constant(const Rational& c, std::size_t n_vars) {
  return monomial(Exponents{}, c, n_vars);
}

Polynomial Polynomial::variable(VarIndex var, std::size_t n_vars) {
  return monomial(Exponents::variable(var), Rational(1), n_vars);
}

Polynomial Polynomial::monomial(const Exponents& exps, const Rational& c, std::size_t n_vars) {
  return from_terms({Monomial{exps, c}}, n_vars);
}

Polynomial Polynomial::from_terms(std::vector<Monomial> terms, std::size_t n_vars) {
  std::map<Exponents, Rational, GrlexLess> accum;
  for (auto& t : terms) accum[t.exponents] += t.coefficient;
  Polynomial p;
  p.rebuild(std::move(accum), n_vars);
  return p;
}

Rational Polynomial::constant_term() const {
  return !terms_.empty() && terms_.front().exponents.empty() ? terms_.front().coefficient
                                                             : Rational(0);
}

Rational Polynomial::coefficient(const Exponents& exps) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exps,
                             [](const Monomial& m, const Exponents& e) {
                               return grlex_less(m.exponents, e);
                             });
  return it != terms_.end() && it->exponents == exps ? it->coefficient : Rational(0);
}

std::vector<VarIndex> Polynomial::variables_used() const {
  std::vector<VarIndex> vars;
  for (const auto& t : terms_)
    for (const auto& e : t.exponents.entries()) vars.push_back(e.first);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

Polynomial Polynomial::with_n_vars(std::size_t n_vars) const {
  Polynomial out = *this;
  out.n_vars_ = std::max(n_vars_, n_vars);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  std::map<Exponents, Rational, GrlexLess> accum;
  for (auto& t : terms_) accum.emplace(t.exponents, t.coefficient);
  for (const auto& t : other.terms_) accum[t.exponents] += t.coefficient;
  rebuild(std::move(accum), std::max(n_vars_, other.n_vars_));
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    degree_ = 0;
    return *this;
  }
  for (auto& t : terms_) t.coefficient *= scale;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::map<Exponents, Rational, GrlexLess> accum;
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) accum[s.exponents * t.exponents] += s.coefficient * t.coefficient;
  Polynomial out;
  out.rebuild(std::move(accum), std::max(a.n_vars_, b.n_vars_));
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result = constant(Rational(1), n_vars_);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].exponents == b.terms_[i].exponents) ||
        a.terms_[i].coefficient != b.terms_[i].coefficient)
      return false;
  }
  return true;
}

// ------------------------------------------------------------------ parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expression() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    Polynomial sum = term();
    if (negate) sum = -sum;
    while (true) {
      if (accept('+')) sum += term();
      else if (accept('-')) sum -= term();
      else return sum;
    }
  }

  Polynomial term() {
    Polynomial prod = factor();
    while (accept('*')) prod = prod * factor();
    return prod;
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_space();
      std::size_t at = pos_;
      unsigned long e = unsigned_integer("exponent");
      if (e > kMaxExponent) throw ParseError("exponent overflow", at);
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial atom() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expression();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (c == 'x' || c == 'X') {
      ++pos_;
      std::size_t at = pos_;
      unsigned long idx = unsigned_integer("variable index");
      if (idx == 0) throw ParseError("variable index 0 (variables are x1, x2, ...)", at);
      if (idx > kMaxVariable) throw ParseError("variable index overflow", at);
      return Polynomial::variable(static_cast<VarIndex>(idx));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Polynomial::constant(number());
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  unsigned long unsigned_integer(const char* what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(std::string("expected ") + what, start);
    if (pos_ - start > 9) throw ParseError(std::string(what) + " overflow", start);
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  Rational number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;
    }
    std::size_t end = pos_;
    std::size_t save = pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_space();
      std::size_t den_start = pos_;
      digits();
      if (den_start == pos_) throw ParseError("expected denominator", den_start);
      try {
        return parse_rational(std::string(text_.substr(start, end - start)) + "/" +
                              std::string(text_.substr(den_start, pos_ - den_start)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), start);
      }
    }
    pos_ = save;
    try {
      return parse_rational(text_.substr(start, end - start));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), start);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    Rational c = it->coefficient;
    bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    bool has_vars = !it->exponents.empty();
    bool need_star = false;
    if (!has_vars || c != 1) {
      out << c.get_str();
      need_star = true;
    }
    for (const auto& [var, exp] : it->exponents.entries()) {
      if (need_star) out << '*';
      out << 'x' << var;
      if (exp > 1) out << '^' << exp;
      need_star = true;
    }
  }
  return out.str();
}

// ------------------------------------------------------------- evaluation

double evaluate(const Polynomial& p, std::span<const double> x) {
  // Constants with no declared variables accept any point.
  if (x.size() < p.n_vars() || (x.size() > p.n_vars() && p.n_vars() > 0))
    throw std::invalid_argument("evaluate: point has length " + std::to_string(x.size()) +
                                ", polynomial has " + std::to_string(p.n_vars()) + " variables");
  double sum = 0.0;
  for (const auto& t : p.terms()) {
    double v = t.coefficient.get_d();
    for (const auto& [var, exp] : t.exponents.entries()) {
      double base = x[var - 1], power = 1.0;
      for (Exponent e = exp; e > 0; e >>= 1) {
        if (e & 1u) power *= base;
        base *= base;
      }
      v *= power;
    }
    sum += v;
  }
  return sum;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : n_vars_(p.n_vars()) {
  offsets_.push_back(0);
  for (const auto& t : p.terms()) {
    coefficients_.push_back(t.coefficient.get_d());
    for (const auto& [var, exp] : t.exponents.entries()) factors_.push_back({var - 1, exp});
    offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
  }
}

double CompiledPolynomial::operator()(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    double v = coefficients_[t];
    for (std::uint32_t f = offsets_[t]; f < offsets_[t + 1]; ++f) {
      double base = x[factors_[f].var];
      for (std::uint32_t e = 0; e < factors_[f].exp; ++e) v *= base;
    }
    sum += v;
  }
  return sum;
}

// ----------------------------------------------------------- derivatives

Polynomial partial_derivative(const Polynomial& p, VarIndex var) {
  std::vector<Monomial> terms;
  for (const auto& t : p.terms()) {
    Exponent e = t.exponents.of(var);
    if (e == 0) continue;
    terms.push_back(Monomial{t.exponents.reduced(var, 1), t.coefficient * e});
  }
  return Polynomial::from_terms(std::move(terms), p.n_vars());
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.n_vars());
  for (VarIndex i = 1; i <= p.n_vars(); ++i) g.push_back(partial_derivative(p, i));
  return g;
}

Polynomial ou_apply(const Polynomial& p) {
  std::vector<Monomial> terms;
  for (const auto& t : p.terms()) {
    for (const auto& [var, exp] : t.exponents.entries()) {
      if (exp >= 2)
        terms.push_back(Monomial{t.exponents.reduced(var, 2),
                                 t.coefficient * (static_cast<unsigned long>(exp) * (exp - 1))});
    }
    if (t.degree() > 0)
      terms.push_back(Monomial{t.exponents, -t.coefficient * static_cast<unsigned long>(t.degree())});
  }
  return Polynomial::from_terms(std::move(terms), p.n_vars());
}

// -------------------------------------------------------- Gaussian moments

namespace {

// (e-1)!! for even e, as a big integer; zero for odd e.
const mpz_class& double_factorial_moment(Exponent e) {
  static thread_local std::vector<mpz_class> table{mpz_class(1)};  // index m: (2m-1)!!
  static const mpz_class zero(0);
  if (e % 2 == 1) return zero;
  std::size_t m = e / 2;
  while (table.size() <= m) {
    std::size_t j = table.size();
    table.push_back(table.back() * static_cast<unsigned long>(2 * j - 1));
  }
  return table[m];
}

bool moment_of_product(const Exponents& a, const Exponents& b, mpz_class& out) {
  out = 1;
  auto ea = a.entries(), eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    Exponent e;
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      e = ea[i++].second;
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      e = eb[j++].second;
    } else {
      e = ea[i++].second + eb[j++].second;
    }
    if (e % 2 == 1) return false;
    out *= double_factorial_moment(e);
  }
  return true;
}

}  // namespace

Rational gaussian_moment(const Polynomial& p) {
  Rational sum(0);
  mpz_class m;
  Exponents none;
  for (const auto& t : p.terms())
    if (moment_of_product(t.exponents, none, m)) sum += t.coefficient * m;
  return sum;
}

Rational gaussian_inner(const Polynomial& p, const Polynomial& q) {
  Rational sum(0);
  mpz_class m;
  for (const auto& s : p.terms())
    for (const auto& t : q.terms())
      if (moment_of_product(s.exponents, t.exponents, m)) sum += s.coefficient * t.coefficient * m;
  return sum;
}

Rational variance(const Polynomial& p) {
  Rational mean = gaussian_moment(p);
  return gaussian_inner(p, p) - mean * mean;
}

Rational l2_norm_squared(const Polynomial& p) { return gaussian_inner(p, p); }

double l2_norm(const Polynomial& p) { return std::sqrt(l2_norm_squared(p).get_d()); }

// ---------------------------------------------------------------- Hermite

Polynomial hermite_polynomial(unsigned order, VarIndex var) {
  // He_{m+1} = x He_m - m He_{m-1}
  Polynomial prev = Polynomial::constant(Rational(1), var);
  if (order == 0) return prev;
  Polynomial x = Polynomial::variable(var);
  Polynomial cur = x;
  for (unsigned m = 1; m < order; ++m) {
    Polynomial next = x * cur - prev * Rational(m);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Polynomial hermite_product(const Exponents& orders, std::size_t n_vars) {
  Polynomial out = Polynomial::constant(Rational(1), n_vars);
  for (const auto& [var, order] : orders.entries()) out = out * hermite_polynomial(order, var);
  return out.with_n_vars(n_vars);
}

namespace {

// x^m = sum_j m! / (j! 2^j (m-2j)!) He_{m-2j}
std::vector<std::pair<Exponent, mpz_class>> power_in_hermite(Exponent m) {
  std::vector<std::pair<Exponent, mpz_class>> out;
  mpz_class m_fact;
  mpz_fac_ui(m_fact.get_mpz_t(), m);
  for (Exponent j = 0; 2 * j <= m; ++j) {
    mpz_class j_fact, rest_fact, two_j;
    mpz_fac_ui(j_fact.get_mpz_t(), j);
    mpz_fac_ui(rest_fact.get_mpz_t(), m - 2 * j);
    mpz_ui_pow_ui(two_j.get_mpz_t(), 2, j);
    out.emplace_back(m - 2 * j, m_fact / (j_fact * two_j * rest_fact));
  }
  return out;
}

}  // namespace

ChaosDecomposition hermite_decompose(const Polynomial& p) {
  std::map<Exponents, Rational, GrlexLess> basis;
  for (const auto& t : p.terms()) {
    // Tensor product of per-variable expansions.
    std::vector<std::pair<std::vector<Exponents::Entry>, Rational>> partial{{{}, t.coefficient}};
    for (const auto& [var, exp] : t.exponents.entries()) {
      auto expansion = power_in_hermite(exp);
      std::vector<std::pair<std::vector<Exponents::Entry>, Rational>> next;
      next.reserve(partial.size() * expansion.size());
      for (const auto& [entries, coef] : partial) {
        for (const auto& [order, weight] : expansion) {
          auto e = entries;
          if (order > 0) e.emplace_back(var, order);
          next.emplace_back(std::move(e), coef * weight);
        }
      }
      partial = std::move(next);
    }
    for (auto& [entries, coef] : partial) basis[Exponents::from_pairs(std::move(entries))] += coef;
  }
  ChaosDecomposition out;
  out.n_vars = p.n_vars();
  std::size_t top = p.degree();
  out.components.assign(top + 1, Polynomial(p.n_vars()));
  out.hermite_terms.assign(top + 1, {});
  for (auto& [orders, coef] : basis) {
    if (coef == 0) continue;
    std::size_t k = orders.degree();
    out.hermite_terms[k].push_back(Monomial{orders, coef});
    out.components[k] += hermite_product(orders, p.n_vars()) * coef;
  }
  return out;
}

Polynomial ChaosDecomposition::reassemble() const {
  Polynomial sum(n_vars);
  for (const auto& c : components) sum += c;
  return sum;
}

Rational ChaosDecomposition::component_norm_squared(std::size_t order) const {
  Rational sum(0);
  for (const auto& t : hermite_terms.at(order)) {
    mpz_class norm = 1;
    for (const auto& [var, a] : t.exponents.entries()) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), a);
      norm *= f;
    }
    sum += t.coefficient * t.coefficient * norm;
  }
  return sum;
}

// ---------------------------------------------------------------- PolynomialMap

PolynomialMap::PolynomialMap(std::vector<Polynomial> components) {
  if (components.empty()) throw std::invalid_argument("polynomial map needs at least one component");
  for (const auto& c : components) n_vars_ = std::max(n_vars_, c.n_vars());
  n_vars_ = std::max<std::size_t>(n_vars_, 1);
  for (auto& c : components) components_.push_back(c.with_n_vars(n_vars_));
}

PolynomialMap PolynomialMap::parse(const std::vector<std::string>& texts) {
  std::vector<Polynomial> comps;
  for (const auto& t : texts) comps.push_back(parse_polynomial(t));
  return PolynomialMap(std::move(comps));
}

std::size_t PolynomialMap::degree() const {
  std::size_t d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

std::string PolynomialMap::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ", ";
    out += gpm::to_string(components_[i]);
  }
  return out + ")";
}

// ------------------------------------------------------------------- JSON

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) {
    nlohmann::json exps = nlohmann::json::object();
    for (const auto& [var, exp] : t.exponents.entries()) exps[std::to_string(var)] = exp;
    terms.push_back({{"exps", exps}, {"coef", t.coefficient.get_str()}});
  }
  return {{"n_vars", p.n_vars()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  std::vector<Monomial> terms;
  for (const auto& t : j.at("terms")) {
    std::vector<Exponents::Entry> pairs;
    for (const auto& [key, value] : t.at("exps").items()) {
      unsigned long var = std::stoul(key);
      if (var == 0) throw std::invalid_argument("variable index 0 in polynomial JSON");
      pairs.emplace_back(static_cast<VarIndex>(var), value.get<Exponent>());
    }
    const auto& c = t.at("coef");
    Rational coef = c.is_string() ? parse_rational(c.get<std::string>())
                                  : rational_from_double(c.get<double>());
    terms.push_back(Monomial{Exponents::from_pairs(std::move(pairs)), coef});
  }
  return Polynomial::from_terms(std::move(terms), j.value("n_vars", std::size_t{0}));
}

}  // namespace gpm

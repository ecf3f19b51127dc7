#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace gpm {

using Rational = mpq_class;
using VarIndex = std::uint32_t;  // 1-based
using Exponent = std::uint32_t;

Rational rational_from_double(double value);  // exact dyadic conversion
Rational parse_rational(std::string_view text);  // "3", "-3/2", "0.25", "1e-3"
std::string to_string(const Rational& value);
double to_double(const Rational& value);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Sparse exponent vector: (variable, exponent) pairs sorted by variable, no zero exponents.
class Exponents {
 public:
  using Entry = std::pair<VarIndex, Exponent>;

  Exponents() = default;
  static Exponents from_pairs(std::vector<Entry> pairs);
  static Exponents variable(VarIndex var, Exponent exp = 1);

  Exponent of(VarIndex var) const;
  std::uint64_t degree() const;
  VarIndex max_var() const;
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  Exponents operator*(const Exponents& other) const;
  // Lowers the exponent of var by `by`; requires of(var) >= by.
  Exponents reduced(VarIndex var, Exponent by) const;

  friend bool operator==(const Exponents&, const Exponents&) = default;

 private:
  std::vector<Entry> entries_;
};

// Graded lexicographic order: total degree first, then lexicographic on the dense
// exponent vector with x1 most significant.
bool grlex_less(const Exponents& a, const Exponents& b);

struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_less(a, b); }
};

struct Monomial {
  Exponents exponents;
  Rational coefficient;

  std::uint64_t degree() const { return exponents.degree(); }
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t n_vars) : n_vars_(n_vars) {}

  static Polynomial constant(const Rational& c, std::size_t n_vars = 0);
  static Polynomial variable(VarIndex var, std::size_t n_vars = 0);
  static Polynomial monomial(const Exponents& exps, const Rational& c, std::size_t n_vars = 0);
  // Merges duplicate exponent vectors and drops zero coefficients.
  static Polynomial from_terms(std::vector<Monomial> terms, std::size_t n_vars = 0);

  std::size_t n_vars() const { return n_vars_; }
  std::size_t degree() const { return degree_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return degree_ == 0; }
  Rational constant_term() const;
  Rational coefficient(const Exponents& exps) const;
  // Variables that occur with positive exponent, ascending.
  std::vector<VarIndex> variables_used() const;
  Polynomial with_n_vars(std::size_t n_vars) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scale);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial pow(unsigned exponent) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void rebuild(std::map<Exponents, Rational, GrlexLess>&& accum, std::size_t n_vars);

  std::vector<Monomial> terms_;  // ascending grlex
  std::size_t n_vars_ = 0;
  std::size_t degree_ = 0;
};

Polynomial parse_polynomial(std::string_view text);
std::string to_string(const Polynomial& p);

double evaluate(const Polynomial& p, std::span<const double> x);
Polynomial partial_derivative(const Polynomial& p, VarIndex var);
std::vector<Polynomial> gradient(const Polynomial& p);
Polynomial ou_apply(const Polynomial& p);

Rational gaussian_moment(const Polynomial& p);
Rational gaussian_inner(const Polynomial& p, const Polynomial& q);
Rational variance(const Polynomial& p);
Rational l2_norm_squared(const Polynomial& p);
double l2_norm(const Polynomial& p);

// Probabilists' Hermite polynomial He_order in variable var.
Polynomial hermite_polynomial(unsigned order, VarIndex var);
// Product of He_{a_i}(x_i) over the entries of a Hermite multi-index.
Polynomial hermite_product(const Exponents& orders, std::size_t n_vars = 0);

struct ChaosDecomposition {
  std::vector<Polynomial> components;  // index = chaos order
  // Coefficients in the Hermite product basis; exponents hold Hermite orders.
  std::vector<std::vector<Monomial>> hermite_terms;
  std::size_t n_vars = 0;

  Polynomial reassemble() const;
  // Exact E[component^2] from the basis norms E[He_a^2] = a!.
  Rational component_norm_squared(std::size_t order) const;
};

ChaosDecomposition hermite_decompose(const Polynomial& p);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

// (E|p|^pexp)^{1/pexp}; std_error is the delta-method error of the norm.
MonteCarloEstimate lp_norm_mc(const Polynomial& p, double pexp, std::size_t n_samples,
                              std::uint64_t seed);

// Double-precision evaluator for sampling-heavy paths.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  std::size_t n_vars() const { return n_vars_; }
  double operator()(std::span<const double> x) const;

 private:
  struct Factor {
    std::uint32_t var;  // 0-based
    std::uint32_t exp;
  };
  std::vector<double> coefficients_;
  std::vector<std::uint32_t> offsets_;  // into factors_, size terms+1
  std::vector<Factor> factors_;
  std::size_t n_vars_ = 0;
};

class PolynomialMap {
 public:
  PolynomialMap() = default;
  explicit PolynomialMap(std::vector<Polynomial> components);
  static PolynomialMap parse(const std::vector<std::string>& texts);

  std::size_t k() const { return components_.size(); }
  std::size_t n_vars() const { return n_vars_; }
  std::size_t degree() const;
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }
  std::string to_string() const;

 private:
  std::vector<Polynomial> components_;
  std::size_t n_vars_ = 0;
};

nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace gpm

#pragma once

#include <functional>
#include <vector>

#include "gpm/polynomial.hpp"

namespace gpm {

// Dense univariate polynomial with double coefficients, coefficients[i] multiplies x^i.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<double> coefficients);
  // Requires p to depend on at most the single variable var.
  static UnivariatePolynomial from(const Polynomial& p, VarIndex var);

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double operator()(double x) const;
  UnivariatePolynomial derivative() const;
  UnivariatePolynomial operator-(double c) const;
  // Distinct real roots in ascending order (roots of even multiplicity included).
  std::vector<double> real_roots() const;
  // All |roots| lie below this bound.
  double root_bound() const;

 private:
  std::vector<double> coefficients_;  // trailing coefficient nonzero
};

// Root of f on [lo, hi] where f(lo), f(hi) have opposite signs (or one is zero).
double bracketed_root(const std::function<double(double)>& f, double lo, double hi);

// Sign changes of f between consecutive points of a search grid refined on each
// segment [breaks[i], breaks[i+1]] towards both ends; returns refined crossings.
std::vector<double> find_crossings(const std::function<double(double)>& f,
                                   const std::vector<double>& breaks);

}  // namespace gpm

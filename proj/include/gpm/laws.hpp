#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gpm/polynomial.hpp"
#include "gpm/univariate.hpp"

namespace gpm {

// Isotropic Gaussian N(mean, sd^2 I) in dimension mean.size().
struct GaussianLaw {
  std::vector<double> mean;
  double sd = 1.0;

  std::size_t dim() const { return mean.size(); }
};

// Law of x^degree - shift for x ~ N(0, 1). Odd degrees keep the sign of x.
struct MonomialPowerLaw {
  unsigned degree = 1;
  double shift = 0.0;
};

// Exact law of p(x) + offset for a univariate polynomial p and x ~ N(0, 1).
class PolynomialLaw {
 public:
  explicit PolynomialLaw(const Polynomial& p, double offset = 0.0);

  const Polynomial& polynomial() const { return source_; }
  double offset() const { return offset_; }
  double cdf(double t) const;
  double density(double t) const;
  // P(lo < X <= hi), accurate for short intervals.
  double interval_mass(double lo, double hi) const;
  std::vector<double> singular_points() const;  // critical values
  std::pair<double, double> range_on(double lo, double hi) const;
  PolynomialLaw shifted(double h) const;
  // E g(p(x) + offset) split at the given value levels, for integrands with kinks there.
  double expectation(const std::function<double(double)>& g, const std::vector<double>& kinks) const;

 private:
  double solve_on_piece(std::size_t piece, double t) const;

  Polynomial source_;
  VarIndex var_ = 1;
  UnivariatePolynomial poly_;
  UnivariatePolynomial derivative_;
  std::vector<double> critical_points_;  // ascending
  double offset_ = 0.0;
};

// One-dimensional laws with closed-form distribution functions.
using ExactLaw1D = std::variant<GaussianLaw, MonomialPowerLaw, PolynomialLaw>;

double cdf(const ExactLaw1D& law, double t);
// P(lo < X <= hi), accurate for short intervals.
double interval_mass(const ExactLaw1D& law, double lo, double hi);
// Density; +infinity at singular points of the density.
double density(const ExactLaw1D& law, double t);
std::vector<double> singular_points(const ExactLaw1D& law);
// Interval outside which the law has mass at most `tail`.
std::pair<double, double> window(const ExactLaw1D& law, double tail);
ExactLaw1D shifted(const ExactLaw1D& law, double h);
// E|X|^p.
double abs_moment(const ExactLaw1D& law, double p);
std::string describe(const ExactLaw1D& law);

// E g(x) for x ~ N(0, 1), integrating piecewise between sorted breakpoints.
double gaussian_expectation(const std::function<double(double)>& g, std::vector<double> breakpoints);

}  // namespace gpm

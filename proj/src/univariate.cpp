#include "gpm/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "gpm/special.hpp"

namespace gpm {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double gaussian_norm_moment(unsigned k, double a) {
  if (k == 0) throw std::invalid_argument("gaussian_norm_moment: dimension must be >= 1");
  return std::exp(0.5 * a * std::log(2.0) + boost::math::lgamma(0.5 * (k + a)) -
                  boost::math::lgamma(0.5 * k));
}

UnivariatePolynomial::UnivariatePolynomial(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  while (coefficients_.size() > 1 && coefficients_.back() == 0.0) coefficients_.pop_back();
  if (coefficients_.empty()) coefficients_.push_back(0.0);
}

UnivariatePolynomial UnivariatePolynomial::from(const Polynomial& p, VarIndex var) {
  std::vector<double> c(p.degree() + 1, 0.0);
  for (const auto& t : p.terms()) {
    for (const auto& [v, e] : t.exponents.entries())
      if (v != var) throw std::invalid_argument("polynomial depends on more than one variable");
    c[t.exponents.of(var)] += t.coefficient.get_d();
  }
  return UnivariatePolynomial(std::move(c));
}

double UnivariatePolynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) v = v * x + *it;
  return v;
}

UnivariatePolynomial UnivariatePolynomial::derivative() const {
  if (coefficients_.size() <= 1) return UnivariatePolynomial({0.0});
  std::vector<double> c(coefficients_.size() - 1);
  for (std::size_t i = 1; i < coefficients_.size(); ++i) c[i - 1] = coefficients_[i] * static_cast<double>(i);
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::operator-(double c) const {
  auto coefs = coefficients_;
  coefs[0] -= c;
  return UnivariatePolynomial(std::move(coefs));
}

double UnivariatePolynomial::root_bound() const {
  double lead = std::abs(coefficients_.back()), m = 0.0;
  for (std::size_t i = 0; i + 1 < coefficients_.size(); ++i) m = std::max(m, std::abs(coefficients_[i]) / lead);
  return 1.0 + m;
}

std::vector<double> UnivariatePolynomial::real_roots() const {
  int d = degree();
  if (d <= 0) return {};
  if (d == 1) return {-coefficients_[0] / coefficients_[1]};
  // Roots separate into monotone pieces between critical points.
  std::vector<double> points{-root_bound()};
  for (double c : derivative().real_roots()) points.push_back(c);
  points.push_back(root_bound());
  std::vector<double> roots;
  auto add = [&](double r) {
    if (roots.empty() || std::abs(roots.back() - r) > 1e-12 * (1.0 + std::abs(r))) roots.push_back(r);
  };
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double a = points[i], b = points[i + 1];
    double fa = (*this)(a), fb = (*this)(b);
    if (fa == 0.0 && i > 0) add(a);  // root at a critical point
    if (fa != 0.0 && fb != 0.0 && (fa < 0) != (fb < 0)) {
      add(bracketed_root(*this, a, b));
    }
  }
  return roots;
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) throw std::runtime_error("bracketed_root: no sign change");
  std::uintmax_t max_iter = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                             boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (r.first + r.second);
}

std::vector<double> find_crossings(const std::function<double(double)>& f,
                                   const std::vector<double>& breaks) {
  constexpr int kUniform = 256;
  constexpr double kRelativeStart = 1e-12;
  constexpr double kRatio = 1.06;
  std::vector<double> crossings;
  std::vector<double> grid;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;
    double w = b - a;
    grid.clear();
    for (int i = 1; i < kUniform; ++i)
      grid.push_back(a + w * 0.5 * (1.0 - std::cos(std::numbers::pi * i / kUniform)));
    for (double off = w * kRelativeStart; off < 0.5 * w; off *= kRatio) {
      grid.push_back(a + off);
      grid.push_back(b - off);
    }
    std::sort(grid.begin(), grid.end());
    double prev_x = 0.0, prev_v = 0.0;
    bool have_prev = false;
    for (double x : grid) {
      if (!(x > a && x < b)) continue;
      double v = f(x);
      if (!std::isfinite(v) || v == 0.0) continue;
      if (have_prev && (v < 0) != (prev_v < 0)) crossings.push_back(bracketed_root(f, prev_x, x));
      prev_x = x;
      prev_v = v;
      have_prev = true;
    }
  }
  return crossings;
}

}  // namespace gpm

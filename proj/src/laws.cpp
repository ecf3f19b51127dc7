#include "gpm/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gpm/special.hpp"

namespace gpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGaussianCutoff = 14.0;  // |x| beyond this carries < 1e-43 mass

double tail_quantile(double tail) { return -normal_quantile(0.5 * std::clamp(tail, 1e-300, 0.5)); }

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// Signed real d-th root.
double signed_root(double u, unsigned d) {
  double r = std::pow(std::abs(u), 1.0 / d);
  return u < 0 ? -r : r;
}

}  // namespace

double gaussian_expectation(const std::function<double(double)>& g, std::vector<double> breakpoints) {
  breakpoints.push_back(-kGaussianCutoff);
  breakpoints.push_back(kGaussianCutoff);
  std::sort(breakpoints.begin(), breakpoints.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double a = std::max(breakpoints[i], -kGaussianCutoff);
    double b = std::min(breakpoints[i + 1], kGaussianCutoff);
    if (!(b > a)) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) { return g(x) * normal_pdf(x); }, a, b, 20, 1e-14);
  }
  return total;
}

// ----------------------------------------------------------- PolynomialLaw

PolynomialLaw::PolynomialLaw(const Polynomial& p, double offset) : source_(p), offset_(offset) {
  auto vars = p.variables_used();
  if (vars.empty()) throw std::invalid_argument("degenerate law: constant polynomial");
  if (vars.size() > 1) throw std::invalid_argument("exact law requires a univariate polynomial");
  var_ = vars.front();
  poly_ = UnivariatePolynomial::from(p, var_);
  derivative_ = poly_.derivative();
  critical_points_ = derivative_.real_roots();
}

PolynomialLaw PolynomialLaw::shifted(double h) const { return PolynomialLaw(source_, offset_ + h); }

double PolynomialLaw::solve_on_piece(std::size_t piece, double t) const {
  double a = piece == 0 ? -kInf : critical_points_[piece - 1];
  double b = piece == critical_points_.size() ? kInf : critical_points_[piece];
  auto g = [&](double x) { return poly_(x) - t; };
  if (!std::isfinite(a) || !std::isfinite(b)) {
    double anchor = std::isfinite(a) ? a : (std::isfinite(b) ? b : 0.0);
    double step = 1.0;
    double lo = std::isfinite(a) ? a : anchor - step;
    double hi = std::isfinite(b) ? b : anchor + step;
    for (int it = 0; it < 200 && (g(lo) < 0) == (g(hi) < 0) && g(lo) != 0.0 && g(hi) != 0.0; ++it) {
      step *= 2.0;
      if (!std::isfinite(a)) lo = anchor - step;
      if (!std::isfinite(b)) hi = anchor + step;
    }
    a = lo;
    b = hi;
  }
  return bracketed_root(g, a, b);
}

double PolynomialLaw::cdf(double t) const {
  double u = t - offset_;
  int d = poly_.degree();
  double lead = poly_.coefficients().back();
  auto value_at = [&](std::size_t boundary) {
    if (boundary == 0) return ((d % 2 == 0) == (lead > 0)) ? kInf : -kInf;
    if (boundary == critical_points_.size() + 1) return lead > 0 ? kInf : -kInf;
    return poly_(critical_points_[boundary - 1]);
  };
  auto phi_at = [&](std::size_t boundary) {
    if (boundary == 0) return 0.0;
    if (boundary == critical_points_.size() + 1) return 1.0;
    return normal_cdf(critical_points_[boundary - 1]);
  };
  double total = 0.0;
  for (std::size_t piece = 0; piece <= critical_points_.size(); ++piece) {
    double va = value_at(piece), vb = value_at(piece + 1);
    double pa = phi_at(piece), pb = phi_at(piece + 1);
    if (vb > va) {
      if (u <= va) continue;
      total += u >= vb ? pb - pa : normal_cdf(solve_on_piece(piece, u)) - pa;
    } else {
      if (u <= vb) continue;
      total += u >= va ? pb - pa : pb - normal_cdf(solve_on_piece(piece, u));
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

double PolynomialLaw::interval_mass(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  double u_lo = lo - offset_, u_hi = hi - offset_;
  std::size_t pieces = critical_points_.size() + 1;
  double total = 0.0;
  for (std::size_t piece = 0; piece < pieces; ++piece) {
    double xa = piece == 0 ? -kInf : critical_points_[piece - 1];
    double xb = piece + 1 == pieces ? kInf : critical_points_[piece];
    double va = std::isfinite(xa) ? poly_(xa) : poly_(xb - 1.0) > poly_(xb) ? kInf : -kInf;
    double vb = std::isfinite(xb) ? poly_(xb) : poly_(xa + 1.0) > poly_(xa) ? kInf : -kInf;
    if (!std::isfinite(xa) && !std::isfinite(xb)) {
      double lead = poly_.coefficients().back();
      va = lead > 0 ? -kInf : kInf;
      vb = -va;
    }
    bool increasing = vb > va;
    double vmin = std::min(va, vb), vmax = std::max(va, vb);
    double s = std::max(u_lo, vmin), e = std::min(u_hi, vmax);
    if (!(e > s)) continue;
    auto x_of = [&](double v) {
      if (v == va) return xa;
      if (v == vb) return xb;
      return solve_on_piece(piece, v);
    };
    double x_s = x_of(s), x_e = x_of(e);
    total += increasing ? normal_interval_mass(x_s, x_e) : normal_interval_mass(x_e, x_s);
  }
  return std::clamp(total, 0.0, 1.0);
}

double PolynomialLaw::density(double t) const {
  double u = t - offset_;
  for (double c : critical_points_)
    if (poly_(c) == u) return kInf;
  double total = 0.0;
  for (double r : (poly_ - u).real_roots()) {
    double slope = std::abs(derivative_(r));
    if (slope == 0.0) return kInf;
    total += normal_pdf(r) / slope;
  }
  return total;
}

std::vector<double> PolynomialLaw::singular_points() const {
  std::vector<double> out;
  for (double c : critical_points_) out.push_back(poly_(c) + offset_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> PolynomialLaw::range_on(double lo, double hi) const {
  double mn = std::min(poly_(lo), poly_(hi)), mx = std::max(poly_(lo), poly_(hi));
  for (double c : critical_points_) {
    if (c <= lo || c >= hi) continue;
    mn = std::min(mn, poly_(c));
    mx = std::max(mx, poly_(c));
  }
  return {mn + offset_, mx + offset_};
}

double PolynomialLaw::expectation(const std::function<double(double)>& g,
                                  const std::vector<double>& kinks) const {
  std::vector<double> breaks = critical_points_;
  for (double k : kinks)
    for (double r : (poly_ - (k - offset_)).real_roots()) breaks.push_back(r);
  return gaussian_expectation([&](double x) { return g(poly_(x) + offset_); }, breaks);
}

// -------------------------------------------------------- ExactLaw1D dispatch

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const GaussianLaw& check_1d(const GaussianLaw& g) {
  if (g.dim() != 1) throw std::invalid_argument("one-dimensional operation on a multivariate Gaussian");
  return g;
}

}  // namespace

double cdf(const ExactLaw1D& law, double t) {
  return std::visit(
      Overloaded{
          [&](const GaussianLaw& g) { return normal_cdf((t - check_1d(g).mean[0]) / g.sd); },
          [&](const MonomialPowerLaw& m) {
            double u = t + m.shift;
            if (m.degree % 2 == 0) return u <= 0 ? 0.0 : normal_central_mass(std::pow(u, 1.0 / m.degree));
            return normal_cdf(signed_root(u, m.degree));
          },
          [&](const PolynomialLaw& p) { return p.cdf(t); }},
      law);
}

double interval_mass(const ExactLaw1D& law, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const GaussianLaw& g) {
            double m = check_1d(g).mean[0];
            return normal_interval_mass((lo - m) / g.sd, (hi - m) / g.sd);
          },
          [&](const MonomialPowerLaw& m) {
            double a = lo + m.shift, b = hi + m.shift;
            if (m.degree % 2 == 1) return normal_interval_mass(signed_root(a, m.degree), signed_root(b, m.degree));
            if (b <= 0) return 0.0;
            double ra = a <= 0 ? 0.0 : std::pow(a, 1.0 / m.degree);
            return 2.0 * normal_interval_mass(ra, std::pow(b, 1.0 / m.degree));
          },
          [&](const PolynomialLaw& p) { return p.interval_mass(lo, hi); }},
      law);
}

double density(const ExactLaw1D& law, double t) {
  return std::visit(
      Overloaded{[&](const GaussianLaw& g) {
                   double z = (t - check_1d(g).mean[0]) / g.sd;
                   return normal_pdf(z) / g.sd;
                 },
                 [&](const MonomialPowerLaw& m) {
                   double u = t + m.shift;
                   unsigned d = m.degree;
                   if (d == 1) return normal_pdf(u);
                   if (u == 0.0) return kInf;
                   if (d % 2 == 0 && u < 0) return 0.0;
                   double r = std::pow(std::abs(u), 1.0 / d);
                   double mult = d % 2 == 0 ? 2.0 : 1.0;
                   return mult / d * r / std::abs(u) * normal_pdf(r);
                 },
                 [&](const PolynomialLaw& p) { return p.density(t); }},
      law);
}

std::vector<double> singular_points(const ExactLaw1D& law) {
  return std::visit(Overloaded{[](const GaussianLaw&) { return std::vector<double>{}; },
                               [](const MonomialPowerLaw& m) {
                                 return m.degree >= 2 ? std::vector<double>{-m.shift} : std::vector<double>{};
                               },
                               [](const PolynomialLaw& p) { return p.singular_points(); }},
                    law);
}

std::pair<double, double> window(const ExactLaw1D& law, double tail) {
  double z = tail_quantile(tail);
  return std::visit(
      Overloaded{[&](const GaussianLaw& g) {
                   double m = check_1d(g).mean[0];
                   return std::pair{m - z * g.sd, m + z * g.sd};
                 },
                 [&](const MonomialPowerLaw& m) {
                   double top = std::pow(z, m.degree);
                   double lo = m.degree % 2 == 0 ? 0.0 : -top;
                   return std::pair{lo - m.shift, top - m.shift};
                 },
                 [&](const PolynomialLaw& p) { return p.range_on(-z, z); }},
      law);
}

ExactLaw1D shifted(const ExactLaw1D& law, double h) {
  return std::visit(Overloaded{[&](const GaussianLaw& g) -> ExactLaw1D {
                                 GaussianLaw out = check_1d(g);
                                 out.mean[0] += h;
                                 return out;
                               },
                               [&](const MonomialPowerLaw& m) -> ExactLaw1D {
                                 return MonomialPowerLaw{m.degree, m.shift - h};
                               },
                               [&](const PolynomialLaw& p) -> ExactLaw1D { return p.shifted(h); }},
                    law);
}

double abs_moment(const ExactLaw1D& law, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("abs_moment: order must be non-negative");
  auto power = [p](double v) { return std::pow(std::abs(v), p); };
  return std::visit(
      Overloaded{[&](const GaussianLaw& g) {
                   double m = check_1d(g).mean[0], s = g.sd;
                   return gaussian_expectation([&](double x) { return power(m + s * x); }, {-m / s});
                 },
                 [&](const MonomialPowerLaw& m) {
                   std::vector<double> breaks{0.0};
                   double u = m.shift;
                   if (m.degree % 2 == 1) breaks.push_back(signed_root(u, m.degree));
                   else if (u > 0) {
                     double r = std::pow(u, 1.0 / m.degree);
                     breaks.push_back(r);
                     breaks.push_back(-r);
                   }
                   return gaussian_expectation(
                       [&](double x) { return power(std::pow(x, m.degree) - m.shift); }, breaks);
                 },
                 [&](const PolynomialLaw& q) { return q.expectation(power, {0.0}); }},
      law);
}

std::string describe(const ExactLaw1D& law) {
  return std::visit(Overloaded{[](const GaussianLaw& g) {
                                 return "gauss(" + number(check_1d(g).mean[0]) + "," + number(g.sd) + ")";
                               },
                               [](const MonomialPowerLaw& m) {
                                 return "monpow(" + std::to_string(m.degree) + "," + number(m.shift) + ")";
                               },
                               [](const PolynomialLaw& p) {
                                 std::string s = "poly(" + to_string(p.polynomial()) + ")";
                                 if (p.offset() != 0.0) s = "shift(" + s + "," + number(p.offset()) + ")";
                                 return s;
                               }},
                    law);
}

}  // namespace gpm

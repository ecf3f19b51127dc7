#pragma once

#include <cmath>
#include <numbers>

namespace gpm {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// 2*Phi(x) - 1 for x >= 0, accurate for small x.
inline double normal_central_mass(double x) { return std::erf(x / std::numbers::sqrt2); }

// Phi(b) - Phi(a) for a <= b without cancellation in either tail or near 0.
inline double normal_interval_mass(double a, double b) {
  constexpr double r = std::numbers::sqrt2;
  if (a >= 0) return 0.5 * (std::erfc(a / r) - std::erfc(b / r));
  if (b <= 0) return 0.5 * (std::erfc(-b / r) - std::erfc(-a / r));
  return 0.5 * (std::erf(b / r) - std::erf(a / r));
}

double normal_quantile(double p);

// E|X|^a for X ~ N(0, I_k): 2^{a/2} Gamma((k+a)/2) / Gamma(k/2).
double gaussian_norm_moment(unsigned k, double a);

}  // namespace gpm

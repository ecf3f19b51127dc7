#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                      int max_depth = 50) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// W1 of two equal-size 1D samples: mean absolute difference of order statistics.
inline double sorted_w1(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sorted_w1 needs equal sizes");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

// Optimal assignment cost between equal-weight point clouds by enumerating permutations.
inline double brute_force_ot(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < a[i].size(); ++j) d2 += (a[i][j] - b[perm[i]][j]) * (a[i][j] - b[perm[i]][j]);
      c += std::sqrt(d2);
    }
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

// Dense tableau simplex for max c·x subject to A x ≤ b, x ≥ 0 with b ≥ 0, using Bland's rule.
inline double lp_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c) {
  std::size_t m = A.size(), n = c.size();
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) throw std::invalid_argument("lp_max needs b >= 0");
    for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];
  const double eps = 1e-12;
  for (int iter = 0; iter < 100000; ++iter) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == n + m) return t[m][n + m];
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps) {
        double r = t[i][n + m] / t[i][enter];
        if (r < best - eps || (std::abs(r - best) <= eps && leave < m && basis[i] < basis[leave])) {
          best = r;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::runtime_error("lp_max: unbounded");
    double piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      double f = t[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("lp_max: iteration limit");
}

// Bounded-Lipschitz duals on a finite 1D or kD support with net mass c_i = μ_i − ν_i.
// φ is split as φ⁺ − φ⁻; FM adds the scalars s, t with |φ| ≤ s, Lip ≤ t, s + t ≤ 1.
inline double bl_dual(const std::vector<std::vector<double>>& x, const std::vector<double>& c, bool fortet_mourier) {
  std::size_t n = x.size();
  std::size_t nv = 2 * n + (fortet_mourier ? 2 : 0);
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  auto row = [&]() { return std::vector<double>(nv, 0.0); };
  auto dist = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < x[i].size(); ++k) s += (x[i][k] - x[j][k]) * (x[i][k] - x[j][k]);
    return std::sqrt(s);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (int sign : {1, -1}) {
      auto r = row();
      r[2 * i] = sign;
      r[2 * i + 1] = -sign;
      if (fortet_mourier) {
        r[2 * n] = -1.0;
        b.push_back(0.0);
      } else {
        b.push_back(1.0);
      }
      A.push_back(r);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto r = row();
      r[2 * i] += 1.0;
      r[2 * i + 1] -= 1.0;
      r[2 * j] -= 1.0;
      r[2 * j + 1] += 1.0;
      if (fortet_mourier) {
        r[2 * n + 1] = -dist(i, j);
        b.push_back(0.0);
      } else {
        b.push_back(dist(i, j));
      }
      A.push_back(r);
    }
  if (fortet_mourier) {
    auto r = row();
    r[2 * n] = 1.0;
    r[2 * n + 1] = 1.0;
    A.push_back(r);
    b.push_back(1.0);
  }
  std::vector<double> obj(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    obj[2 * i] = c[i];
    obj[2 * i + 1] = -c[i];
  }
  return lp_max(A, b, obj);
}

// E|X|^α for X ~ N(0, I_k): 2^{α/2} Γ((k+α)/2) / Γ(k/2).
inline double chi_moment(unsigned k, double alpha) {
  return std::pow(2.0, alpha / 2.0) * std::tgamma((k + alpha) / 2.0) / std::tgamma(k / 2.0);
}

// Exact double factorial moment E X^{2m} = (2m−1)!!.
inline double normal_even_moment(unsigned two_m) {
  double r = 1.0;
  for (unsigned i = two_m; i > 1; i -= 2) r *= static_cast<double>(i - 1);
  return two_m % 2 ? 0.0 : r;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gpm/polynomial.hpp"

namespace gpm {

// Gram matrix of component gradients, m_ij = <∇f_i, ∇f_j>, kept exactly.
struct MalliavinMatrixPoly {
  std::vector<Polynomial> entries;  // row-major k×k, symmetric
  std::size_t k = 0;
  PolynomialMap source;

  const Polynomial& at(std::size_t i, std::size_t j) const { return entries[i * k + j]; }
};

MalliavinMatrixPoly malliavin_matrix(const PolynomialMap& f);

inline constexpr std::size_t kMaxSymbolicDet = 3;

// Δ_f = det M_f as an exact polynomial; refused for k > 3.
Polynomial malliavin_det(const PolynomialMap& f);

// Determinant by LU with partial pivoting.
double lu_determinant(Eigen::MatrixXd a);
// Transposed cofactor matrix, from (k−1)×(k−1) minors.
Eigen::MatrixXd adjugate(const Eigen::MatrixXd& a);

struct MalliavinEval {
  std::vector<double> x;
  Eigen::MatrixXd M;
  double det = 0.0;  // clamped at zero within −1e-10·scale
  Eigen::MatrixXd A;
  double scale = 1.0;     // ‖M‖_F^k
  double residual = 0.0;  // ‖M·A − Δ·I‖_F
  nlohmann::json to_json() const;
};

// Pointwise Gram matrix, determinant and adjugate; errors when Δ < −1e-10·scale.
class MalliavinEvaluator {
 public:
  explicit MalliavinEvaluator(const PolynomialMap& f);
  Eigen::MatrixXd matrix(std::span<const double> x) const;
  MalliavinEval evaluate(std::span<const double> x) const;
  double det(std::span<const double> x) const;
  std::size_t k() const { return k_; }
  std::size_t n_vars() const { return n_vars_; }

 private:
  std::size_t k_ = 0, n_vars_ = 0;
  std::vector<CompiledPolynomial> grad_;  // row-major k × n_vars
};

struct Expectation {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact values
  std::size_t n_samples = 0;
  bool exact = false;
  nlohmann::json to_json() const;
};

// E Δ_f exactly from Gaussian moments (k ≤ 3).
Expectation expected_det_exact(const PolynomialMap& f);
Expectation expected_det_mc(const PolynomialMap& f, std::size_t n_samples, std::uint64_t seed);
// Exact when k ≤ 3, Monte Carlo otherwise.
Expectation expected_det(const PolynomialMap& f, std::size_t n_samples, std::uint64_t seed);

// sqrt of the top eigenvalue of C_ij = E[∂_i p ∂_j p]; 0 for constants.
double grad_star_norm(const Polynomial& p);

struct CarberyWrightProfile {
  std::vector<double> t, probability, probability_se, ratio, ratio_se;
  double mean_abs = 0.0, mean_abs_se = 0.0;
  double sup_ratio = 0.0, sup_t = 0.0;
  unsigned degree = 0;
  bool exact = false;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json to_json() const;
};

// r(t) = γ(|p| ≤ t) (E|p|)^{1/d} / (d t^{1/d}). Polynomials in a single variable use the
// exact law unless force_mc is set.
CarberyWrightProfile carbery_wright_profile(const Polynomial& p, const std::vector<double>& t_grid,
                                            std::size_t n_samples, std::uint64_t seed, bool force_mc = false);

struct SmallBallProfile {
  std::vector<double> s, probability, probability_se;
  std::vector<std::optional<double>> bound;  // 2ck(d−1)(EΔ)^{−β}s^β; empty when d ≤ 1 or EΔ = 0
  double beta = 0.0, c = 1.0;
  Expectation expected_det;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json to_json() const;
};

SmallBallProfile small_ball_profile(const PolynomialMap& f, const std::vector<double>& s_grid, std::size_t n_samples,
                                    std::uint64_t seed, double c = 1.0);

struct DetPerturbation {
  double lhs = 0.0, rhs = 0.0, scale = 1.0;
  bool holds = false;
};
// |det A − det B| ≤ ‖A−B‖_HS (‖A‖²_HS + ‖B‖²_HS)^{(k−1)/2}, slack 1e-12·scale.
DetPerturbation det_perturbation_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct ReversePoincare {
  Rational lhs, rhs;  // E|∇p|², d·Var p
  unsigned degree = 0;
  bool holds = false;
  bool equality = false;
  nlohmann::json to_json() const;
};
ReversePoincare reverse_poincare_check(const Polynomial& p);

struct GaussianTailProfile {
  std::vector<double> t, exceedance, exceedance_se;
  std::vector<std::optional<double>> exact;  // single-variable polynomials only
  double r = 0.0, c_hat = 0.0, norm2 = 0.0;
  unsigned degree = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json to_json() const;
};
// γ(|p| ≥ t‖p‖₂) by Monte Carlo and ĉ_r = sup_t γ̂ exp(r t^{2/d}); requires 0 < r < d/(2e).
GaussianTailProfile gaussian_tail_check(const Polynomial& p, double r, const std::vector<double>& t_grid,
                                        std::size_t n_samples, std::uint64_t seed);

struct MalliavinSummary {
  Expectation expected_det;
  std::vector<double> sigma;      // standard deviations of the components
  std::vector<double> grad_star;  // ‖∇f_i‖_*
  unsigned degree = 0;
  bool degenerate = false;  // E Δ_f = 0 (or below 1e-12 for Monte Carlo)
  nlohmann::json to_json() const;
};
MalliavinSummary summarize(const PolynomialMap& f, std::size_t n_samples, std::uint64_t seed);

}  // namespace gpm

#include "gpm/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gpm/laws.hpp"
#include "gpm/parallel.hpp"
#include "gpm/sampling.hpp"

namespace gpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kDetClamp = 1e-10;
constexpr std::size_t kChunk = 1 << 14;

std::vector<std::vector<Polynomial>> gradients(const PolynomialMap& f) {
  std::vector<std::vector<Polynomial>> g;
  for (const auto& c : f.components()) {
    auto gi = gradient(c.with_n_vars(f.n_vars()));
    gi.resize(f.n_vars(), Polynomial(f.n_vars()));
    g.push_back(std::move(gi));
  }
  return g;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::optional<PolynomialLaw> single_variable_law(const Polynomial& p) {
  if (p.variables_used().size() != 1) return std::nullopt;
  return PolynomialLaw(p);
}

struct Moments {
  double mean = 0.0, se = 0.0;
};

Moments mean_and_se(const std::vector<double>& v) {
  double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

std::vector<double> values_on_gaussian(const Polynomial& p, std::size_t n_samples, std::uint64_t seed) {
  std::size_t n_vars = std::max<std::size_t>(1, p.n_vars());
  SampleSet s = sample_gaussian(n_vars, n_samples, seed);
  CompiledPolynomial cp(p.with_n_vars(n_vars));
  std::vector<double> out(n_samples);
  parallel_chunks((n_samples + kChunk - 1) / kChunk, [&](std::size_t c) {
    std::size_t end = std::min(n_samples, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) out[i] = cp(s.point(i));
  });
  return out;
}

}  // namespace

MalliavinMatrixPoly malliavin_matrix(const PolynomialMap& f) {
  auto g = gradients(f);
  std::size_t k = f.k();
  MalliavinMatrixPoly m{std::vector<Polynomial>(k * k, Polynomial(f.n_vars())), k, f};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      Polynomial s(f.n_vars());
      for (std::size_t l = 0; l < f.n_vars(); ++l) s += g[i][l] * g[j][l];
      m.entries[i * k + j] = s;
      m.entries[j * k + i] = s;
    }
  return m;
}

Polynomial malliavin_det(const PolynomialMap& f) {
  if (f.k() > kMaxSymbolicDet)
    throw std::invalid_argument("symbolic determinant is limited to k <= 3; use pointwise evaluation");
  auto m = malliavin_matrix(f);
  const auto& M = m;
  if (m.k == 1) return M.at(0, 0);
  if (m.k == 2) return M.at(0, 0) * M.at(1, 1) - M.at(0, 1) * M.at(1, 0);
  return M.at(0, 0) * (M.at(1, 1) * M.at(2, 2) - M.at(1, 2) * M.at(2, 1)) -
         M.at(0, 1) * (M.at(1, 0) * M.at(2, 2) - M.at(1, 2) * M.at(2, 0)) +
         M.at(0, 2) * (M.at(1, 0) * M.at(2, 1) - M.at(1, 1) * M.at(2, 0));
}

double lu_determinant(Eigen::MatrixXd a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  Eigen::Index n = a.rows();
  double det = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      a.row(piv).swap(a.row(c));
      det = -det;
    }
    det *= a(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      double factor = a(r, c) / a(c, c);
      for (Eigen::Index j = c + 1; j < n; ++j) a(r, j) -= factor * a(c, j);
    }
  }
  return det;
}

Eigen::MatrixXd adjugate(const Eigen::MatrixXd& a) {
  Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("adjugate of a non-square matrix");
  Eigen::MatrixXd adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
    return adj;
  }
  Eigen::MatrixXd minor(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      // Cofactor of (j, i): delete row j and column i.
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      adj(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * lu_determinant(minor);
    }
  return adj;
}

nlohmann::json MalliavinEval::to_json() const {
  return {{"x", x}, {"M", matrix_json(M)}, {"det", det}, {"A", matrix_json(A)}, {"residual", residual}, {"scale", scale}};
}

MalliavinEvaluator::MalliavinEvaluator(const PolynomialMap& f) : k_(f.k()), n_vars_(f.n_vars()) {
  for (const auto& row : gradients(f))
    for (const auto& g : row) grad_.emplace_back(g);
}

Eigen::MatrixXd MalliavinEvaluator::matrix(std::span<const double> x) const {
  if (x.size() != n_vars_) throw std::invalid_argument("point dimension does not match the map");
  Eigen::MatrixXd g(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(n_vars_));
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t l = 0; l < n_vars_; ++l)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = grad_[i * n_vars_ + l](x);
  return g * g.transpose();
}

namespace {

double clamp_det(double det, double scale) {
  if (det >= 0.0) return det;
  if (det >= -kDetClamp * scale) return 0.0;
  throw std::runtime_error("Malliavin determinant is negative beyond round-off: " + std::to_string(det));
}

}  // namespace

double MalliavinEvaluator::det(std::span<const double> x) const {
  Eigen::MatrixXd m = matrix(x);
  double scale = std::pow(m.norm(), static_cast<double>(k_));
  return clamp_det(lu_determinant(m), scale);
}

MalliavinEval MalliavinEvaluator::evaluate(std::span<const double> x) const {
  MalliavinEval e;
  e.x.assign(x.begin(), x.end());
  e.M = matrix(x);
  e.scale = std::pow(e.M.norm(), static_cast<double>(k_));
  e.det = clamp_det(lu_determinant(e.M), e.scale);
  e.A = adjugate(e.M);
  auto kk = static_cast<Eigen::Index>(k_);
  e.residual = (e.M * e.A - e.det * Eigen::MatrixXd::Identity(kk, kk)).norm();
  return e;
}

nlohmann::json Expectation::to_json() const {
  nlohmann::json j{{"value", value}, {"exact", exact}};
  if (!exact) {
    j["std_error"] = std_error;
    j["n_samples"] = n_samples;
  }
  return j;
}

Expectation expected_det_exact(const PolynomialMap& f) {
  Expectation e;
  e.value = to_double(gaussian_moment(malliavin_det(f)));
  e.exact = true;
  return e;
}

Expectation expected_det_mc(const PolynomialMap& f, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  MalliavinEvaluator ev(f);
  std::size_t n_vars = std::max<std::size_t>(1, f.n_vars());
  SampleSet s = sample_gaussian(n_vars, n_samples, seed);
  std::vector<double> d(n_samples);
  parallel_chunks((n_samples + kChunk - 1) / kChunk, [&](std::size_t c) {
    std::size_t end = std::min(n_samples, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) d[i] = ev.det(s.point(i).first(f.n_vars()));
  });
  auto m = mean_and_se(d);
  return {m.mean, m.se, n_samples, false};
}

Expectation expected_det(const PolynomialMap& f, std::size_t n_samples, std::uint64_t seed) {
  return f.k() <= kMaxSymbolicDet ? expected_det_exact(f) : expected_det_mc(f, n_samples, seed);
}

double grad_star_norm(const Polynomial& p) {
  if (p.is_constant()) return 0.0;
  auto g = gradient(p);
  auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) c(i, j) = c(j, i) = to_double(gaussian_inner(g[i], g[j]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

nlohmann::json CarberyWrightProfile::to_json() const {
  return {{"t", t},
          {"probability", probability},
          {"probability_se", probability_se},
          {"ratio", ratio},
          {"ratio_se", ratio_se},
          {"mean_abs", mean_abs},
          {"mean_abs_se", mean_abs_se},
          {"sup_ratio", sup_ratio},
          {"sup_t", sup_t},
          {"degree", degree},
          {"exact", exact},
          {"n_samples", n_samples},
          {"seed", seed}};
}

CarberyWrightProfile carbery_wright_profile(const Polynomial& p, const std::vector<double>& t_grid,
                                            std::size_t n_samples, std::uint64_t seed, bool force_mc) {
  if (p.is_constant()) throw std::invalid_argument("Carbery-Wright profile needs a non-constant polynomial");
  CarberyWrightProfile out;
  out.degree = static_cast<unsigned>(p.degree());
  out.t = t_grid;
  double d = out.degree;
  auto law = force_mc ? std::nullopt : single_variable_law(p);
  std::vector<double> sorted_abs;
  if (law) {
    out.exact = true;
    out.mean_abs = abs_moment(ExactLaw1D(*law), 1.0);
  } else {
    if (n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
    out.n_samples = n_samples;
    out.seed = seed;
    sorted_abs = values_on_gaussian(p, n_samples, seed);
    for (double& v : sorted_abs) v = std::abs(v);
    auto m = mean_and_se(sorted_abs);
    out.mean_abs = m.mean;
    out.mean_abs_se = m.se;
    std::sort(sorted_abs.begin(), sorted_abs.end());
    if (sorted_abs.back() == sorted_abs.front()) throw std::runtime_error("polynomial has zero sample variance");
  }
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("t grid must be positive");
    double prob, prob_se = 0.0;
    if (law) {
      prob = law->interval_mass(-t, t);
    } else {
      double n = static_cast<double>(sorted_abs.size());
      prob = static_cast<double>(std::upper_bound(sorted_abs.begin(), sorted_abs.end(), t) - sorted_abs.begin()) / n;
      prob_se = std::sqrt(prob * (1.0 - prob) / n);
    }
    double ratio = prob * std::pow(out.mean_abs, 1.0 / d) / (d * std::pow(t, 1.0 / d));
    double rel = 0.0;
    if (!law && prob > 0.0) rel = std::hypot(prob_se / prob, out.mean_abs_se / (d * out.mean_abs));
    out.probability.push_back(prob);
    out.probability_se.push_back(prob_se);
    out.ratio.push_back(ratio);
    out.ratio_se.push_back(ratio * rel);
    if (ratio > out.sup_ratio) {
      out.sup_ratio = ratio;
      out.sup_t = t;
    }
  }
  return out;
}

nlohmann::json SmallBallProfile::to_json() const {
  nlohmann::json b = nlohmann::json::array();
  for (const auto& v : bound) b.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
  return {{"s", s},       {"probability", probability}, {"probability_se", probability_se},
          {"bound", b},   {"beta", beta},               {"c", c},
          {"expected_det", expected_det.to_json()},     {"n_samples", n_samples}, {"seed", seed}};
}

SmallBallProfile small_ball_profile(const PolynomialMap& f, const std::vector<double>& s_grid, std::size_t n_samples,
                                    std::uint64_t seed, double c) {
  if (n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  SmallBallProfile out;
  out.s = s_grid;
  out.c = c;
  out.n_samples = n_samples;
  out.seed = seed;
  MalliavinEvaluator ev(f);
  std::size_t n_vars = std::max<std::size_t>(1, f.n_vars());
  SampleSet pts = sample_gaussian(n_vars, n_samples, seed);
  std::vector<double> d(n_samples);
  parallel_chunks((n_samples + kChunk - 1) / kChunk, [&](std::size_t ch) {
    std::size_t end = std::min(n_samples, (ch + 1) * kChunk);
    for (std::size_t i = ch * kChunk; i < end; ++i) d[i] = ev.det(pts.point(i).first(f.n_vars()));
  });
  if (f.k() <= kMaxSymbolicDet) {
    out.expected_det = expected_det_exact(f);
  } else {
    auto m = mean_and_se(d);
    out.expected_det = {m.mean, m.se, n_samples, false};
  }
  std::sort(d.begin(), d.end());
  double kd1 = static_cast<double>(f.k()) * (static_cast<double>(f.degree()) - 1.0);
  out.beta = kd1 > 0.0 ? 1.0 / (2.0 * kd1) : 0.0;
  double n = static_cast<double>(n_samples);
  for (double s : s_grid) {
    if (!(s >= 0.0)) throw std::invalid_argument("s grid must be non-negative");
    double prob = static_cast<double>(std::upper_bound(d.begin(), d.end(), s) - d.begin()) / n;
    out.probability.push_back(prob);
    out.probability_se.push_back(std::sqrt(prob * (1.0 - prob) / n));
    if (kd1 > 0.0 && out.expected_det.value > 0.0)
      out.bound.emplace_back(2.0 * c * kd1 * std::pow(out.expected_det.value, -out.beta) * std::pow(s, out.beta));
    else
      out.bound.emplace_back(std::nullopt);
  }
  return out;
}

DetPerturbation det_perturbation_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols())
    throw std::invalid_argument("det perturbation needs square matrices of equal shape");
  DetPerturbation r;
  double k = static_cast<double>(a.rows());
  double sq = a.squaredNorm() + b.squaredNorm();
  r.lhs = std::abs(lu_determinant(a) - lu_determinant(b));
  r.rhs = (a - b).norm() * std::pow(sq, (k - 1.0) / 2.0);
  r.scale = std::max(1.0, std::pow(sq, k / 2.0));
  r.holds = r.lhs <= r.rhs + 1e-12 * r.scale;
  return r;
}

nlohmann::json ReversePoincare::to_json() const {
  return {{"lhs", to_double(lhs)}, {"rhs", to_double(rhs)}, {"lhs_exact", to_string(lhs)}, {"rhs_exact", to_string(rhs)},
          {"degree", degree},      {"holds", holds},        {"equality", equality}};
}

ReversePoincare reverse_poincare_check(const Polynomial& p) {
  ReversePoincare r;
  r.degree = static_cast<unsigned>(p.degree());
  r.lhs = 0;
  for (const auto& g : gradient(p)) r.lhs += l2_norm_squared(g);
  r.rhs = Rational(r.degree) * variance(p);
  r.holds = r.lhs <= r.rhs;
  r.equality = r.lhs == r.rhs;
  return r;
}

nlohmann::json GaussianTailProfile::to_json() const {
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& v : exact) ex.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
  return {{"t", t},   {"exceedance", exceedance}, {"exceedance_se", exceedance_se}, {"exact", ex},
          {"r", r},   {"c_hat", c_hat},           {"norm2", norm2},                 {"degree", degree},
          {"n_samples", n_samples},               {"seed", seed}};
}

GaussianTailProfile gaussian_tail_check(const Polynomial& p, double r, const std::vector<double>& t_grid,
                                        std::size_t n_samples, std::uint64_t seed) {
  if (p.is_constant()) throw std::invalid_argument("tail check needs a non-constant polynomial");
  double d = static_cast<double>(p.degree());
  if (!(r > 0.0 && r < d / (2.0 * std::numbers::e))) throw std::invalid_argument("r must lie in (0, d/(2e))");
  if (n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  GaussianTailProfile out;
  out.t = t_grid;
  out.r = r;
  out.degree = static_cast<unsigned>(p.degree());
  out.norm2 = l2_norm(p);
  out.n_samples = n_samples;
  out.seed = seed;
  auto v = values_on_gaussian(p, n_samples, seed);
  for (double& x : v) x = std::abs(x);
  std::sort(v.begin(), v.end());
  auto law = single_variable_law(p);
  double n = static_cast<double>(n_samples);
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw std::invalid_argument("t grid must be non-negative");
    double u = t * out.norm2;
    double prob = static_cast<double>(v.end() - std::lower_bound(v.begin(), v.end(), u)) / n;
    out.exceedance.push_back(prob);
    out.exceedance_se.push_back(std::sqrt(prob * (1.0 - prob) / n));
    if (law) out.exact.emplace_back(t == 0.0 ? 1.0 : law->interval_mass(-kInf, -u) + law->interval_mass(u, kInf));
    else out.exact.emplace_back(std::nullopt);
    out.c_hat = std::max(out.c_hat, prob * std::exp(r * std::pow(t, 2.0 / d)));
  }
  return out;
}

nlohmann::json MalliavinSummary::to_json() const {
  return {{"expected_det", expected_det.to_json()}, {"sigma", sigma},   {"grad_star_norm", grad_star},
          {"degree", degree},                       {"degenerate", degenerate}};
}

MalliavinSummary summarize(const PolynomialMap& f, std::size_t n_samples, std::uint64_t seed) {
  MalliavinSummary s;
  s.expected_det = expected_det(f, n_samples, seed);
  for (const auto& c : f.components()) {
    s.sigma.push_back(std::sqrt(to_double(variance(c))));
    s.grad_star.push_back(grad_star_norm(c));
  }
  s.degree = static_cast<unsigned>(f.degree());
  s.degenerate = s.expected_det.exact ? s.expected_det.value == 0.0 : s.expected_det.value < 1e-12;
  return s;
}

}  // namespace gpm

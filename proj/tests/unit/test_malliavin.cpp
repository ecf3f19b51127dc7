#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles/oracles.hpp"
#include "gpm/laws.hpp"
#include "gpm/malliavin.hpp"
#include "gpm/measure_spec.hpp"
#include "random_poly.hpp"

using namespace gpm;

namespace {

PolynomialMap M(const char* s) { return parse_map(s); }

}  // namespace

TEST_CASE("Malliavin matrix and determinant") {
  auto f = M("x1+x2; x1*x2");
  auto m = malliavin_matrix(f);
  CHECK(m.k == 2);
  CHECK(m.at(0, 0) == parse_polynomial("2"));
  CHECK(m.at(0, 1) == parse_polynomial("x1 + x2"));
  CHECK(m.at(1, 1) == parse_polynomial("x1^2 + x2^2"));
  CHECK(malliavin_det(f) == parse_polynomial("x1^2 - 2*x1*x2 + x2^2"));
  CHECK(expected_det_exact(f).value == 2.0);
  CHECK(expected_det_exact(M("x1; x2")).value == 1.0);
  CHECK(expected_det_exact(M("x1; x1")).value == 0.0);
  CHECK_THROWS(malliavin_det(M("x1; x2; x3; x4")));
  auto mc = expected_det_mc(f, 400000, 1);
  CHECK(std::abs(mc.value - 2.0) <= 4 * mc.std_error);
}

TEST_CASE("pointwise evaluation, adjugate and determinant") {
  MalliavinEvaluator ev(M("x1+x2; x1*x2; x3^2"));
  std::vector<double> x{0.3, -1.2, 0.8};
  auto e = ev.evaluate(x);
  CHECK(e.det == doctest::Approx(e.M.determinant()).epsilon(1e-12));
  CHECK(e.residual <= 1e-10 * std::max(1.0, e.scale));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 1; k <= 6; ++k) {
    Eigen::MatrixXd a(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = u(rng);
    CHECK(lu_determinant(a) == doctest::Approx(a.determinant()).epsilon(1e-10));
    Eigen::MatrixXd adj = adjugate(a);
    CHECK((a * adj - a.determinant() * Eigen::MatrixXd::Identity(k, k)).norm() <= 1e-9 * std::max(1.0, std::abs(a.determinant())));
  }
}

TEST_CASE("gradient operator norm") {
  CHECK(grad_star_norm(parse_polynomial("x1^2")) == doctest::Approx(2.0));
  CHECK(grad_star_norm(parse_polynomial("x1 + x2")) == doctest::Approx(std::sqrt(2.0)));
  CHECK(grad_star_norm(parse_polynomial("5")) == 0.0);
}

TEST_CASE("determinant perturbation bound") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 2000; ++t) {
    int k = 1 + t % 6;
    Eigen::MatrixXd a(k, k), b(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        a(i, j) = u(rng);
        b(i, j) = u(rng);
      }
    auto r = det_perturbation_bound(a, b);
    CHECK(r.holds);
    CHECK(r.rhs - r.lhs >= -1e-12 * r.scale);
  }
}

TEST_CASE("reverse Poincare with the chaos constant") {
  auto r = reverse_poincare_check(parse_polynomial("x1^3"));
  CHECK(r.lhs == 27);
  CHECK(r.rhs == 45);
  CHECK(r.holds);
  CHECK_FALSE(r.equality);
  auto h = reverse_poincare_check(parse_polynomial("(x1^2 - 1)*x2"));
  CHECK(h.equality);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) CHECK(reverse_poincare_check(testutil::random_polynomial(rng, 5, 6)).holds);
}

TEST_CASE("Carbery-Wright ratios") {
  std::vector<double> t{1e-6, 1e-4, 1e-2, 0.5, 2.0};
  for (unsigned d : {1u, 2u, 3u, 4u}) {
    auto p = Polynomial::monomial(Exponents::variable(1, d), 1);
    auto prof = carbery_wright_profile(p, t, 0, 1);
    CHECK(prof.exact);
    // As t → 0: γ(|x|^d ≤ t) ≈ 2φ(0) t^{1/d}, so the ratio tends to 2φ(0)(E|x|^d)^{1/d}/d.
    double abs_moment = std::pow(2.0, d / 2.0) * std::tgamma((d + 1) / 2.0) / std::sqrt(M_PI);
    double limit = 2 * oracle::phi(0) * std::pow(abs_moment, 1.0 / d) / d;
    CHECK(prof.sup_ratio == doctest::Approx(limit).epsilon(1e-4));
    CHECK(prof.sup_t == doctest::Approx(t.front()));
  }
  // γ(|x| ≤ t) = 2φ(0)t(1 − t²/6 + …): no cancellation even at t = 1e-12.
  auto tiny = carbery_wright_profile(parse_polynomial("x1"), {1e-12}, 0, 1);
  CHECK(tiny.probability[0] == doctest::Approx(2 * oracle::phi(0) * 1e-12).epsilon(1e-12));
  PolynomialLaw cubic(parse_polynomial("x1^3 - 3*x1"), 0.25);
  for (double a : {-5.0, -2.0, -0.3, 0.1, 1.75})
    for (double b : {-1.0, 0.0, 2.25, 9.0})
      if (b > a) CHECK(std::abs(cubic.interval_mass(a, b) - (cubic.cdf(b) - cubic.cdf(a))) <= 1e-12);
  auto h2 = parse_polynomial("x1^2 - 1");
  std::vector<double> tt{0.05, 0.2, 0.5, 1.0};
  auto exact = carbery_wright_profile(h2, tt, 0, 1);
  auto mc = carbery_wright_profile(h2, tt, 1000000, 7, true);
  CHECK_FALSE(mc.exact);
  for (std::size_t i = 0; i < tt.size(); ++i)
    CHECK(std::abs(mc.probability[i] - exact.probability[i]) <= 3 * mc.probability_se[i]);
}

TEST_CASE("small-ball profile of a two-dimensional map") {
  auto f = M("x1; x2");
  std::vector<double> s{0.01, 0.1};
  auto prof = small_ball_profile(f, s, 200000, 4);
  // det M = 1 identically: γ(Δ ≤ s) = 0 for s < 1.
  for (double p : prof.probability) CHECK(p == 0.0);
  auto g = M("x1+x2; x1*x2");
  auto pg = small_ball_profile(g, {0.1}, 1000000, 5);
  // Δ = (x1 − x2)², so γ(Δ ≤ s) = 2Φ(√(s/2)) − 1.
  double exact = 2 * oracle::Phi(std::sqrt(0.05)) - 1;
  CHECK(std::abs(pg.probability[0] - exact) <= 4 * pg.probability_se[0]);
}

TEST_CASE("Gaussian tail profile") {
  auto prof = gaussian_tail_check(parse_polynomial("x1"), 0.15, {0.0, 1.0, 2.0}, 200000, 3);
  REQUIRE(prof.exact[1].has_value());
  CHECK(*prof.exact[1] == doctest::Approx(2 * (1 - oracle::Phi(1.0))).epsilon(1e-9));
  CHECK(prof.c_hat >= 1.0);
  CHECK_THROWS(gaussian_tail_check(parse_polynomial("x1"), 0.5, {1.0}, 1000, 1));
}

TEST_CASE("summaries flag degenerate maps") {
  auto s = summarize(M("x1; x1"), 10000, 1);
  CHECK(s.degenerate);
  auto t = summarize(M("x1+x2; x1*x2"), 10000, 1);
  CHECK_FALSE(t.degenerate);
  CHECK(t.expected_det.value == 2.0);
  CHECK(t.sigma[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(t.to_json().contains("grad_star_norm"));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "gpm/besov.hpp"
#include "gpm/metrics.hpp"

using namespace gpm;

namespace {

const std::vector<double> kUnit{1.0};

ShiftProfile profile_of(const Measure& m, const std::vector<double>& h, const Discretization& d = {}) {
  return shift_tv_profile(m, kUnit, h, d);
}

}  // namespace

TEST_CASE("shift profiles of closed-form laws") {
  auto p = profile_of(Measure::gaussian(0, 1), {1.0});
  CHECK(p.tv[0] == doctest::Approx(2 * (2 * oracle::Phi(0.5) - 1)).epsilon(1e-9));
  CHECK(profile_of(Measure::gaussian(0, 1), {0.0}).tv[0] == doctest::Approx(0.0));
  for (unsigned d : {2u, 4u}) {
    auto q = profile_of(Measure::monomial_power(d, 0.0), {1e-3, 0.05});
    for (std::size_t i = 0; i < q.h.size(); ++i)
      CHECK(q.tv[i] == doctest::Approx(2 * (2 * oracle::Phi(std::pow(q.h[i], 1.0 / d)) - 1)).epsilon(1e-7));
  }
  for (double v : p.tv) {
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }
}

TEST_CASE("seminorm lower bounds") {
  auto h = default_shift_grid();
  auto g = profile_of(Measure::gaussian(0, 1), h);
  CHECK(besov_seminorm(g, 1.0).value == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-4));
  auto m = profile_of(Measure::monomial_power(2, 0.0), h);
  CHECK(besov_seminorm(m, 0.5).value == doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(2e-3));
  CHECK_THROWS(besov_seminorm(ShiftProfile{}, 0.5));
}

TEST_CASE("seminorm is monotone under profile refinement") {
  auto coarse = profile_of(Measure::monomial_power(3, 0.0), log_grid(1e-3, 1.0, 5));
  auto fine = profile_of(Measure::monomial_power(3, 0.0), log_grid(1e-3, 1.0, 20));
  for (double a : {0.25, 0.5, 1.0}) CHECK(besov_seminorm(fine, a).value >= besov_seminorm(coarse, a).value);
}

TEST_CASE("narrow densities are not uniformly smooth") {
  double prev = 0.0;
  for (std::size_t cells : {1u << 10, 1u << 12, 1u << 14}) {
    GridFunction f({make_axis(-1.0, 1.0, cells)});
    f.values[cells / 2] = 1.0;
    Measure spike{GridDensity(f)};
    Discretization d;
    d.cells_1d = cells;
    double s = besov_seminorm(SignedMeasure{{1.0, spike}}, 0.5, d).value;
    CHECK(s > 1.5 * prev);
    prev = s;
  }
}

TEST_CASE("fitted orders") {
  auto g = profile_of(Measure::gaussian(0, 1), log_grid(1e-4, 1.0, 40));
  CHECK(besov_order_fit(g).alpha_hat == doctest::Approx(1.0).epsilon(0.02));
  for (unsigned d : {2u, 3u, 4u}) {
    auto m = profile_of(Measure::monomial_power(d, 0.0), log_grid(1e-4, 1.0, 40));
    CHECK(std::abs(besov_order_fit(m).alpha_hat - 1.0 / d) <= 0.02);
  }
  ShiftProfile flat;
  flat.direction = kUnit;
  flat.h = log_grid(1e-3, 1e-1, 4);
  flat.tv.assign(flat.h.size(), 0.5);
  CHECK_THROWS(besov_order_fit(flat));
  ShiftProfile tiny = flat;
  tiny.h.resize(3);
  tiny.tv = {0.1, 0.2, 0.3};
  CHECK_THROWS(besov_order_fit(tiny));
}

TEST_CASE("shift-TV subadditivity on grids") {
  Discretization d;
  d.cells_1d = 1 << 12;
  Measure chi(density_grid(Measure::monomial_power(2, 0.0), d));
  for (double h1 : {0.01, 0.1})
    for (double h2 : {0.02, 0.3}) {
      std::vector<double> h{h1, h2, h1 + h2};
      std::sort(h.begin(), h.end());
      auto p = profile_of(chi, h, d);
      auto tv_at = [&](double s) { return p.tv[std::find(p.h.begin(), p.h.end(), s) - p.h.begin()]; };
      CHECK(tv_at(h1 + h2) <= tv_at(h1) + tv_at(h2) + 1e-9);
    }
}

TEST_CASE("Gaussian smoothing") {
  Discretization d;
  d.cells_1d = 1 << 14;
  double eps = 0.5;
  auto s = gaussian_smooth(Measure::gaussian(0, 1), eps, d);
  double sd = std::sqrt(1 + eps * eps);
  double err = 0.0;
  const auto& ax = s.axes()[0];
  for (std::size_t i = 0; i < ax.n; ++i) err = std::max(err, std::abs(s.values()[i] - oracle::phi(ax.center(i) / sd) / sd));
  CHECK(err <= 1e-6);

  auto dirac = gaussian_smooth(Measure(DiscreteMeasure{1, {0.0}, {1.0}}), 0.2, d);
  CHECK(lp_norm_of_density(dirac, 2.0) == doctest::Approx(std::pow(2 * std::sqrt(M_PI) * 0.2, -0.5)).epsilon(1e-6));

  auto chi = gaussian_smooth(Measure::monomial_power(2, 0.0), 0.1, d);
  double peak = *std::max_element(chi.values().begin(), chi.values().end());
  CHECK(std::isfinite(peak));
  CHECK(std::isfinite(bv_norm(chi)));
  CHECK(bv_norm(chi) == doctest::Approx(2 * peak).epsilon(1e-6));

  Measure a = Measure::gaussian(0, 1), b = Measure::gaussian(0.7, 1.3);
  double raw = tv_distance(a, b, d).value;
  double smoothed = tv_distance(Measure(gaussian_smooth(a, 0.3, d)), Measure(gaussian_smooth(b, 0.3, d)), d).value;
  CHECK(smoothed <= raw + 1e-6);
}

TEST_CASE("fractional constant matches the Gamma-function form") {
  for (unsigned k : {1u, 2u, 3u, 5u})
    for (double a : {0.05, 0.25, 0.5, 0.75, 1.0}) CHECK(std::abs(hll_constant(k, a) - 1.0 - oracle::chi_moment(k, a)) <= 1e-10);
  CHECK(hll_constant(1, 1.0) == doctest::Approx(1 + std::sqrt(2 / M_PI)).epsilon(1e-12));
  CHECK(hll_constant(2, 1.0) == doctest::Approx(1 + std::sqrt(M_PI / 2)).epsilon(1e-12));
  CHECK(hll_constant(3, 1e-6) == doctest::Approx(2.0).epsilon(1e-5));
  // Increasing in k everywhere; in α only for k ≥ 2. For k = 1, E|X|^α dips to a minimum near α ≈ 0.8.
  for (unsigned k = 1; k < 5; ++k)
    for (double a = 0.1; a < 0.95; a += 0.1) {
      CHECK(hll_constant(k + 1, a) > hll_constant(k, a));
      double step = hll_constant(k, a + 0.1) - hll_constant(k, a);
      double oracle_step = oracle::chi_moment(k, a + 0.1) - oracle::chi_moment(k, a);
      CHECK(step * oracle_step > 0);
      if (k >= 2) CHECK(step > 0);
    }
  CHECK(hll_constant(1, 0.5) < hll_constant(1, 0.1));
  CHECK_THROWS(hll_constant(1, 0.0));
  CHECK_THROWS(hll_constant(0, 0.5));
}

TEST_CASE("smoothing split bounds") {
  auto split = smoothing_split(Measure::gaussian(0, 1), Measure::gaussian(0, 1), 0.1, 1.0);
  CHECK(split.term_smooth_gap == doctest::Approx(0.0));
  CHECK(split.term_smoothed_tv == doctest::Approx(0.0));

  Measure a = Measure::gaussian(0, 1), b = Measure::gaussian(0.1, 1);
  double sn = besov_seminorm(difference(a, b), 1.0).value;
  double eps = balancing_eps(kantorovich(a, b).value, sn, 1.0);
  auto s = smoothing_split(a, b, eps, 1.0);
  CHECK(s.term_smooth_gap <= s.bound_smooth_gap * 1.05);
  CHECK(s.term_smoothed_tv <= s.bound_smoothed_tv * 1.05);

  Measure c = Measure::monomial_power(2, 0.0), e = Measure::monomial_power(2, -0.05);
  double sn2 = besov_seminorm(difference(c, e), 0.5).value;
  auto s2 = smoothing_split(c, e, balancing_eps(kantorovich(c, e).value, sn2, 0.5), 0.5);
  CHECK(s2.term_smooth_gap <= s2.bound_smooth_gap * 1.05);
  CHECK(s2.term_smoothed_tv <= s2.bound_smoothed_tv * 1.05);
}

TEST_CASE("profile serialization") {
  auto p = profile_of(Measure::gaussian(0, 1), {0.1, 0.2});
  std::ostringstream out;
  p.write_csv(out);
  CHECK(out.str().rfind("h,tv\n", 0) == 0);
  CHECK(p.to_json()["representation"] == "exact-1d");
}

TEST_CASE("two-dimensional profiles use all directions") {
  Discretization d;
  d.cells_2d = 128;
  auto ps = direction_profiles(SignedMeasure{{1.0, Measure::gaussian(std::vector<double>{0, 0}, 1)}}, {0.1, 0.2}, d, 8);
  CHECK(ps.size() == 8);
  // Isotropic law: profiles agree across directions up to discretization.
  for (const auto& p : ps) CHECK(p.tv[0] == doctest::Approx(ps[0].tv[0]).epsilon(1e-2));
}

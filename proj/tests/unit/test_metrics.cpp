#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "gpm/measure_spec.hpp"
#include "gpm/metrics.hpp"
#include "gpm/sampling.hpp"

using namespace gpm;

namespace {

Measure atoms(std::vector<double> x, std::vector<double> w = {}) {
  if (w.empty()) w.assign(x.size(), 1.0 / static_cast<double>(x.size()));
  return Measure(DiscreteMeasure{1, std::move(x), std::move(w)});
}

Measure atoms2(const std::vector<std::vector<double>>& pts) {
  DiscreteMeasure d{2, {}, {}};
  for (const auto& p : pts) {
    d.points.insert(d.points.end(), p.begin(), p.end());
    d.weights.push_back(1.0 / static_cast<double>(pts.size()));
  }
  return Measure(std::move(d));
}

Measure samples_1d(std::vector<double> x) {
  SampleSet s;
  s.dim = 1;
  s.values = std::move(x);
  return Measure(std::move(s));
}

struct RandomPair {
  std::vector<double> support;
  std::vector<double> mu, nu;
};

// Two probability vectors on a shared random 1D support of size ≤ 6.
RandomPair random_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> loc(-3.0, 3.0), w(0.0, 1.0);
  RandomPair r;
  int n = size(rng);
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    r.support.push_back(loc(rng));
    r.mu.push_back(w(rng));
    r.nu.push_back(w(rng));
    s1 += r.mu.back();
    s2 += r.nu.back();
  }
  for (int i = 0; i < n; ++i) {
    r.mu[i] /= s1;
    r.nu[i] /= s2;
  }
  return r;
}

}  // namespace

TEST_CASE("total variation of Gaussians against quadrature") {
  for (double h : {0.01, 0.3, 1.0, 2.5}) {
    double tv = tv_distance(Measure::gaussian(0, 1), Measure::gaussian(h, 1)).value;
    double quad = oracle::simpson([h](double x) { return std::abs(oracle::phi(x) - oracle::phi(x - h)); }, -h / 2 - 14,
                                  h / 2, 1e-14) +
                  oracle::simpson([h](double x) { return std::abs(oracle::phi(x) - oracle::phi(x - h)); }, h / 2,
                                  h / 2 + 14, 1e-14);
    CHECK(tv == doctest::Approx(quad).epsilon(1e-9));
    CHECK(tv == doctest::Approx(2 * (2 * oracle::Phi(h / 2) - 1)).epsilon(1e-9));
  }
  CHECK(tv_distance(Measure::gaussian(0, 1), Measure::gaussian(0, 1)).value == doctest::Approx(0.0));
  CHECK(tv_distance(atoms({0.0}), atoms({1.0})).value == doctest::Approx(2.0));
}

TEST_CASE("distances between grid densities") {
  Discretization d;
  d.cells_1d = 1 << 14;
  Measure g0(density_grid(Measure::gaussian(0, 1), d)), g1(density_grid(Measure::gaussian(1, 1), d));
  auto tv = tv_distance(g0, g1, d);
  CHECK(tv.representation == "grid");
  CHECK(std::abs(tv.value - 2 * (2 * oracle::Phi(0.5) - 1)) <= 1e-6);
  CHECK(std::abs(kantorovich(g0, g1, d).value - 1.0) <= 1e-6);
}

TEST_CASE("Kantorovich distance in one dimension") {
  for (double h : {1e-3, 0.5, 2.0}) CHECK(kantorovich(Measure::gaussian(0, 1), Measure::gaussian(h, 1)).value == doctest::Approx(h).epsilon(1e-9));
  CHECK(kantorovich(atoms({0.0}), atoms({1.0})).value == doctest::Approx(1.0));
  for (unsigned d : {2u, 3u, 4u})
    for (double h : {1e-3, 0.1}) {
      double v = kantorovich(Measure::monomial_power(d, 0.0), Measure::monomial_power(d, h)).value;
      CHECK(std::abs(v - h) <= 1e-8);
    }
}

TEST_CASE("empirical W1 equals the sorted-sample oracle") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 1 + rep * 37;
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = 0.5 * g(rng) + 0.3;
    double w = kantorovich_1d(samples_1d(x), samples_1d(y)).value;
    CHECK(std::abs(w - oracle::sorted_w1(x, y)) <= 1e-12 * std::max(1.0, w));
  }
}

TEST_CASE("discrete OT against brute force and its plan invariants") {
  CHECK(kantorovich_kd(atoms2({{0, 0}, {1, 0}}), atoms2({{0, 0}, {0, 1}})).distance.value ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int rep = 0; rep < 30; ++rep) {
    std::size_t n = 2 + rep % 5;
    std::vector<std::vector<double>> a(n, std::vector<double>(2)), b(n, std::vector<double>(2));
    for (auto& p : a) p = {u(rng), u(rng)};
    for (auto& p : b) p = {u(rng), u(rng)};
    auto res = kantorovich_kd(atoms2(a), atoms2(b));
    CHECK(res.distance.value == doctest::Approx(oracle::brute_force_ot(a, b)).epsilon(1e-10));
    CHECK(res.plan.marginal_error() <= 1e-10);
    CHECK(res.plan.recomputed_cost() == doctest::Approx(res.distance.value).epsilon(1e-12));
    for (const auto& e : res.plan.entries) CHECK(std::get<2>(e) >= 0.0);
  }
  CHECK(kantorovich_kd(atoms2({{0, 0}}), atoms2({{3, 4}})).distance.value == doctest::Approx(5.0));
}

TEST_CASE("entropic fallback above the exact size limit") {
  SampleSet a = sample_gaussian(2, 300, 4), b = sample_gaussian(2, 300, 5);
  for (auto& v : b.values) v += 0.5;
  auto exact = kantorovich_kd(Measure(a), Measure(b));
  auto approx = kantorovich_kd(Measure(a), Measure(b), 100);
  CHECK(exact.distance.representation == "network-simplex");
  CHECK(approx.distance.representation == "sinkhorn");
  CHECK(approx.distance.details.contains("regularization"));
  CHECK(approx.distance.details.contains("duality_gap"));
  CHECK(approx.distance.value == doctest::Approx(exact.distance.value).epsilon(0.02));
  CHECK(approx.plan.marginal_error() <= 1e-6);
}

TEST_CASE("transport plan csv") {
  auto res = kantorovich_kd(atoms2({{0, 0}, {1, 0}}), atoms2({{0, 0}, {0, 1}}));
  std::ostringstream out;
  res.plan.write_csv(out);
  CHECK(out.str().rfind("i,j,weight\n", 0) == 0);
}

TEST_CASE("bounded-Lipschitz distances on tiny supports") {
  CHECK(kr_distance(atoms({0.0}), atoms({1.0})).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kr_distance(atoms({0.0}), atoms({3.0})).value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fm_distance(atoms({0.0}), atoms({1.0})).value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(fm_distance(atoms({0.0}), atoms({0.0})).value == doctest::Approx(0.0));
}

TEST_CASE("bounded-Lipschitz distances match a dense LP") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    auto p = random_pair(rng);
    std::vector<std::vector<double>> x;
    std::vector<double> c;
    for (std::size_t i = 0; i < p.support.size(); ++i) {
      x.push_back({p.support[i]});
      c.push_back(p.mu[i] - p.nu[i]);
    }
    Measure mu = atoms(p.support, p.mu), nu = atoms(p.support, p.nu);
    CHECK(kr_distance(mu, nu).value == doctest::Approx(oracle::bl_dual(x, c, false)).epsilon(1e-9));
    CHECK(fm_distance(mu, nu).value == doctest::Approx(oracle::bl_dual(x, c, true)).epsilon(1e-9));
  }
}

TEST_CASE("metric ordering and axioms on random discrete measures") {
  std::mt19937_64 rng(4);
  const double tol = 1e-9;
  for (int rep = 0; rep < 200; ++rep) {
    auto p = random_pair(rng);
    Measure mu = atoms(p.support, p.mu), nu = atoms(p.support, p.nu);
    double fm = fm_distance(mu, nu).value, kr = kr_distance(mu, nu).value;
    double k = kantorovich(mu, nu).value, tv = tv_distance(mu, nu).value;
    CHECK(fm <= kr + tol);
    CHECK(kr <= std::min(k, tv) + tol);
    CHECK(kr <= 2 * fm + tol);
    CHECK(fm_distance(nu, mu).value == doctest::Approx(fm).epsilon(1e-12));
    CHECK(kr_distance(nu, mu).value == doctest::Approx(kr).epsilon(1e-12));
  }
  for (int rep = 0; rep < 50; ++rep) {
    auto p = random_pair(rng), q = random_pair(rng);
    Measure a = atoms(p.support, p.mu), b = atoms(p.support, p.nu), c = atoms(q.support, q.mu);
    CHECK(kantorovich(a, c).value <= kantorovich(a, b).value + kantorovich(b, c).value + tol);
    CHECK(tv_distance(a, c).value <= tv_distance(a, b).value + tv_distance(b, c).value + tol);
    CHECK(kr_distance(a, c).value <= kr_distance(a, b).value + kr_distance(b, c).value + tol);
    CHECK(fm_distance(a, c).value <= fm_distance(a, b).value + fm_distance(b, c).value + tol);
  }
}

TEST_CASE("density norms") {
  auto g = density_grid(Measure::gaussian(0, 1));
  CHECK(bv_norm(g) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-6));
  CHECK(lp_norm_of_density(g, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lp_norm_of_density(g, 2.0) == doctest::Approx(std::pow(2.0 * std::sqrt(M_PI), -0.5)).epsilon(1e-6));
  GridFunction u({make_axis(0.0, 1.0, 100)});
  for (auto& v : u.values) v = 1.0;
  CHECK(bv_norm(GridDensity(u)) == doctest::Approx(2.0));
}

TEST_CASE("chi-square density norms across refinement") {
  Discretization coarse, fine;
  coarse.cells_1d = 1 << 12;
  fine.cells_1d = 1 << 16;
  Measure chi = Measure::monomial_power(2, 0.0);
  double bv_c = bv_norm(density_grid(chi, coarse)), bv_f = bv_norm(density_grid(chi, fine));
  CHECK(bv_f > 1.5 * bv_c);
  double l19_c = lp_norm_of_density(density_grid(chi, coarse), 1.9), l19_f = lp_norm_of_density(density_grid(chi, fine), 1.9);
  double l21_c = lp_norm_of_density(density_grid(chi, coarse), 2.1), l21_f = lp_norm_of_density(density_grid(chi, fine), 2.1);
  CHECK(l21_f / l21_c > l19_f / l19_c);
}

TEST_CASE("distance reports carry schema and grid metadata") {
  auto r = tv_distance(Measure::gaussian(0, 1), Measure::gaussian(1, 1));
  auto j = r.to_json();
  CHECK(j["schema"] == "gpm/1");
  CHECK(j["metric"] == "tv");
  CHECK(j.contains("grid"));
  CHECK_THROWS(tv_distance(Measure::gaussian(0, 1), Measure::gaussian(std::vector<double>{0, 0}, 1)));
}

TEST_CASE("heavy truncation is an error for Kantorovich on grids") {
  GridFunction g({make_axis(0.0, 1.0, 64)});
  for (auto& v : g.values) v = 1.0;
  GridFunction h({make_axis(0.0, 1.0, 64)});
  for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] = i < 32 ? 2.0 : 0.0;
  CHECK_THROWS(kantorovich_1d(Measure(GridDensity(g)), Measure(GridDensity(h))));
}

#include "gpm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "gpm/network_simplex.hpp"
#include "gpm/parallel.hpp"
#include "gpm/special.hpp"

namespace gpm {

namespace {

constexpr std::size_t kMixedQuantileAtoms = 1 << 16;
constexpr double kTruncationFlag = 1e-4;

std::optional<std::uint64_t> first_seed(const SignedMeasure& m) {
  for (const auto& p : m)
    if (const auto* s = std::get_if<SampleSet>(&p.second.representation())) return s->seed;
  return std::nullopt;
}

bool is_atomic(const Measure& m) {
  return std::holds_alternative<SampleSet>(m.representation()) ||
         std::holds_alternative<DiscreteMeasure>(m.representation());
}

DiscreteMeasure atoms_of(const Measure& m) {
  if (const auto* s = std::get_if<SampleSet>(&m.representation())) return DiscreteMeasure::from_samples(*s);
  if (const auto* d = std::get_if<DiscreteMeasure>(&m.representation())) return *d;
  throw std::invalid_argument("measure is not atomic");
}

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void require_same_dim(const Measure& a, const Measure& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("incompatible dimensions: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

// Net signed atoms of Σ w_j m_j, merged by exact location; zero net weights dropped.
DiscreteMeasure net_atoms(const std::vector<std::pair<double, DiscreteMeasure>>& parts) {
  std::map<std::vector<double>, double> merged;
  std::size_t dim = parts.front().second.dim;
  for (const auto& [w, d] : parts) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      auto p = d.point(i);
      merged[std::vector<double>(p.begin(), p.end())] += w * d.weights[i];
    }
  }
  DiscreteMeasure out{dim, {}, {}};
  for (const auto& [x, w] : merged) {
    if (w == 0.0) continue;
    out.points.insert(out.points.end(), x.begin(), x.end());
    out.weights.push_back(w);
  }
  return out;
}

// ∫|F| for a signed 1D atomic measure.
double atom_cdf_l1(const DiscreteMeasure& net) {
  std::vector<std::size_t> order(net.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return net.points[a] < net.points[b]; });
  double f = 0.0, total = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    f += net.weights[order[k]];
    total += std::abs(f) * (net.points[order[k + 1]] - net.points[order[k]]);
  }
  return total;
}

// Atoms at the quantiles (i + 1/2)/n of a monotone distribution function on [lo, hi].
template <class Cdf>
DiscreteMeasure quantile_atoms(Cdf&& F, double lo, double hi, std::size_t n) {
  DiscreteMeasure out{1, std::vector<double>(n), std::vector<double>(n, 1.0 / static_cast<double>(n))};
  double left = lo;
  for (std::size_t i = 0; i < n; ++i) {
    double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double x = bracketed_root([&](double t) { return F(t) - q; }, left, hi);
    out.points[i] = x;
    left = x;
  }
  return out;
}

DiscreteMeasure grid_quantile_atoms(const GridFunction& g, std::size_t n) {
  if (g.dim() != 1) throw std::invalid_argument("quantile atoms need a 1D grid");
  const auto& a = g.axes[0];
  double w = a.width(), total = g.integral();
  DiscreteMeasure out{1, std::vector<double>(n), std::vector<double>(n, 1.0 / static_cast<double>(n))};
  std::size_t cell = 0;
  double below = 0.0;  // mass left of the current cell
  for (std::size_t i = 0; i < n; ++i) {
    double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * total;
    while (cell + 1 < a.n && below + g.values[cell] * w < q) below += g.values[cell++] * w;
    double m = g.values[cell] * w;
    double frac = m > 0.0 ? std::clamp((q - below) / m, 0.0, 1.0) : 0.5;
    out.points[i] = a.edge(cell) + frac * w;
  }
  return out;
}

DiscreteMeasure continuous_quantile_atoms(const Measure& m, std::size_t n, double tail) {
  if (auto law = m.exact_1d()) {
    auto [lo, hi] = window(*law, std::min(tail, 0.25 / static_cast<double>(n)));
    return quantile_atoms([&](double t) { return cdf(*law, t); }, lo, hi, n);
  }
  if (const auto* g = std::get_if<GridDensity>(&m.representation())) return grid_quantile_atoms(g->function(), n);
  throw std::invalid_argument("quantile atoms need a one-dimensional continuous law");
}

}  // namespace

nlohmann::json DistanceResult::to_json() const {
  nlohmann::json j{{"schema", "gpm/1"}, {"metric", metric}, {"value", value}, {"representation", representation},
                   {"grid", grid}};
  if (seed) j["seed"] = *seed;
  if (!details.empty()) j["details"] = details;
  return j;
}

// ------------------------------------------------------------------- TV

DistanceResult tv_norm(const SignedMeasure& m, const Discretization& disc) {
  DistanceResult r{"tv", 0.0, "", nullptr, first_seed(m)};
  if (m.empty()) throw std::invalid_argument("tv of an empty combination");
  std::size_t k = m.front().second.dim();
  for (const auto& p : m)
    if (p.second.dim() != k) throw std::invalid_argument("incompatible dimensions in total variation");
  if (all_exact_1d(m)) {
    r.value = tv_norm_exact_1d(exact_parts(m), disc.tail_mass);
    r.representation = "exact-1d";
    r.details["tail_mass"] = disc.tail_mass;
    return r;
  }
  bool atoms = std::all_of(m.begin(), m.end(), [](const auto& p) {
    return std::holds_alternative<DiscreteMeasure>(p.second.representation());
  });
  if (atoms) {
    std::vector<std::pair<double, DiscreteMeasure>> parts;
    for (const auto& [w, part] : m) parts.emplace_back(w, atoms_of(part));
    auto net = net_atoms(parts);
    for (double w : net.weights) r.value += std::abs(w);
    r.representation = "atoms";
    return r;
  }
  Rendering rd = render(m, disc);
  r.value = rd.grid.l1_norm();
  r.representation = "grid";
  r.grid = rd.metadata();
  return r;
}

DistanceResult tv_distance(const Measure& mu, const Measure& nu, const Discretization& disc) {
  require_same_dim(mu, nu);
  return tv_norm(difference(mu, nu), disc);
}

// ------------------------------------------------------------ Kantorovich

DistanceResult kantorovich_1d(const Measure& mu, const Measure& nu, const Discretization& disc) {
  require_same_dim(mu, nu);
  if (mu.dim() != 1) throw std::invalid_argument("kantorovich_1d needs one-dimensional measures");
  SignedMeasure diff = difference(mu, nu);
  DistanceResult r{"kantorovich", 0.0, "", nullptr, first_seed(diff)};
  if (all_exact_1d(diff)) {
    r.value = cdf_l1_exact_1d(exact_parts(diff), disc.tail_mass);
    r.representation = "exact-1d";
    r.details["tail_mass"] = disc.tail_mass;
    return r;
  }
  if (is_atomic(mu) || is_atomic(nu)) {
    auto support = [&](const Measure& m) {
      return is_atomic(m) ? atoms_of(m) : continuous_quantile_atoms(m, kMixedQuantileAtoms, disc.tail_mass);
    };
    r.value = atom_cdf_l1(net_atoms({{1.0, support(mu)}, {-1.0, support(nu)}}));
    r.representation = is_atomic(mu) && is_atomic(nu) ? "atoms" : "quantile-atoms";
    if (r.representation == "quantile-atoms") r.details["quantile_atoms"] = kMixedQuantileAtoms;
    return r;
  }
  Rendering rd = render(diff, disc);
  if (rd.boundary_mass > kMaxBoundaryMass)
    throw std::runtime_error("kantorovich: boundary mass " + std::to_string(rd.boundary_mass) +
                             " exceeds 1e-3; the grid truncates a heavy tail");
  r.value = cdf_l1(rd.grid);
  r.representation = "grid";
  r.grid = rd.metadata();
  return r;
}

double TransportPlan::marginal_error() const {
  std::vector<double> rows(source_weights.size(), 0.0), cols(target_weights.size(), 0.0);
  for (const auto& [i, j, w] : entries) {
    rows[i] += w;
    cols[j] += w;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) err = std::max(err, std::abs(rows[i] - source_weights[i]));
  for (std::size_t j = 0; j < cols.size(); ++j) err = std::max(err, std::abs(cols[j] - target_weights[j]));
  return err;
}

double TransportPlan::recomputed_cost() const {
  double c = 0.0;
  for (const auto& [i, j, w] : entries) {
    std::span<const double> x(source.data() + i * dim, dim), y(target.data() + j * dim, dim);
    c += w * euclid(x, y);
  }
  return c;
}

void TransportPlan::write_csv(std::ostream& out) const {
  auto old = out.precision(17);
  out << "i,j,weight\n";
  for (const auto& [i, j, w] : entries) out << i << ',' << j << ',' << w << '\n';
  out.precision(old);
}

namespace {

TransportPlan exact_plan(const DiscreteMeasure& a, const DiscreteMeasure& b, std::size_t& pivots) {
  std::size_t n = a.size(), m = b.size();
  MinCostFlow mcf(n + m);
  for (std::size_t i = 0; i < n; ++i) mcf.set_supply(i, a.weights[i]);
  for (std::size_t j = 0; j < m; ++j) mcf.set_supply(n + j, -b.weights[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mcf.add_arc(i, n + j, euclid(a.point(i), b.point(j)));
  auto sol = mcf.solve();
  pivots = sol.pivots;
  TransportPlan plan{a.dim, a.points, b.points, a.weights, b.weights, {}, sol.cost};
  for (std::size_t e = 0; e < sol.flow.size(); ++e)
    if (sol.flow[e] > 0.0) plan.entries.emplace_back(e / m, e % m, sol.flow[e]);
  return plan;
}

struct SinkhornOutcome {
  TransportPlan plan;
  double regularization = 0.0;
  double dual = 0.0;
  std::size_t iterations = 0;
};

constexpr std::size_t kSinkhornMaxIterations = 20000;
constexpr double kSinkhornMarginalTolerance = 1e-9;
constexpr std::size_t kSinkhornStageIterations = 200;
constexpr double kSinkhornStageTolerance = 1e-6;

double log_sum_exp(const std::vector<double>& v) {
  double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

SinkhornOutcome sinkhorn_plan(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::size_t n = a.size(), m = b.size();
  std::vector<double> cost(n * m);
  double mean_cost = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mean_cost += cost[i * m + j] = euclid(a.point(i), b.point(j));
  mean_cost /= static_cast<double>(n * m);
  double target_eps = 1e-2 * std::max(mean_cost, 1e-300);
  double eps = target_eps;
  std::vector<double> f(n, 0.0), g(m, 0.0), la(n), lb(m);
  for (std::size_t i = 0; i < n; ++i) la[i] = std::log(a.weights[i]);
  for (std::size_t j = 0; j < m; ++j) lb[j] = std::log(b.weights[j]);

  auto update_f = [&] {
    parallel_chunks(n, [&](std::size_t i) {
      std::vector<double> t(m);
      for (std::size_t j = 0; j < m; ++j) t[j] = (g[j] - cost[i * m + j]) / eps;
      f[i] = eps * (la[i] - log_sum_exp(t));
    });
  };
  auto update_g = [&] {
    parallel_chunks(m, [&](std::size_t j) {
      std::vector<double> t(n);
      for (std::size_t i = 0; i < n; ++i) t[i] = (f[i] - cost[i * m + j]) / eps;
      g[j] = eps * (lb[j] - log_sum_exp(t));
    });
  };
  auto row_error = [&] {
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += std::exp((f[i] + g[j] - cost[i * m + j]) / eps);
      err = std::max(err, std::abs(s - a.weights[i]));
    }
    return err;
  };

  SinkhornOutcome out;
  out.regularization = target_eps;
  bool converged = false;
  // ε-scaling: warm-start each stage from the potentials of a coarser one.
  for (eps = std::max(mean_cost, target_eps); eps > target_eps; eps = std::max(eps * 0.5, target_eps)) {
    for (std::size_t it = 1; it <= kSinkhornStageIterations; ++it) {
      update_f();
      update_g();
      ++out.iterations;
      if (it % 10 == 0 && row_error() < kSinkhornStageTolerance) break;
    }
  }
  eps = target_eps;
  for (std::size_t it = 1; it <= kSinkhornMaxIterations; ++it) {
    update_f();
    update_g();
    ++out.iterations;
    if (it % 10 == 0 && row_error() < kSinkhornMarginalTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("sinkhorn did not converge after " + std::to_string(out.iterations) + " iterations");
  out.plan = TransportPlan{a.dim, a.points, b.points, a.weights, b.weights, {}, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double w = std::exp((f[i] + g[j] - cost[i * m + j]) / eps);
      if (w > 0.0) {
        out.plan.entries.emplace_back(i, j, w);
        out.plan.cost += w * cost[i * m + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.dual += f[i] * a.weights[i];
  for (std::size_t j = 0; j < m; ++j) out.dual += g[j] * b.weights[j];
  return out;
}

}  // namespace

KantorovichResult kantorovich_kd(const Measure& mu, const Measure& nu, std::size_t n_max) {
  require_same_dim(mu, nu);
  if (!is_atomic(mu) || !is_atomic(nu))
    throw std::invalid_argument("kantorovich_kd needs empirical or atomic measures");
  DiscreteMeasure a = atoms_of(mu), b = atoms_of(nu);
  KantorovichResult r;
  r.distance = DistanceResult{"kantorovich", 0.0, "", nullptr, first_seed(difference(mu, nu))};
  if (a.size() <= n_max && b.size() <= n_max) {
    std::size_t pivots = 0;
    r.plan = exact_plan(a, b, pivots);
    r.distance.representation = "network-simplex";
    r.distance.details["pivots"] = pivots;
  } else {
    auto s = sinkhorn_plan(a, b);
    r.plan = std::move(s.plan);
    r.distance.representation = "sinkhorn";
    r.distance.details["regularization"] = s.regularization;
    r.distance.details["duality_gap"] = r.plan.cost - s.dual;
    r.distance.details["iterations"] = s.iterations;
  }
  r.distance.value = r.plan.cost;
  r.distance.details["support"] = {a.size(), b.size()};
  return r;
}

DistanceResult kantorovich(const Measure& mu, const Measure& nu, const Discretization& disc) {
  require_same_dim(mu, nu);
  if (mu.dim() == 1) return kantorovich_1d(mu, nu, disc);
  const auto* g1 = std::get_if<GaussianLaw>(&mu.representation());
  const auto* g2 = std::get_if<GaussianLaw>(&nu.representation());
  if (g1 && g2) {
    DistanceResult r{"kantorovich", 0.0, "closed-form", nullptr, std::nullopt};
    if (g1->sd == g2->sd) {
      r.value = euclid(g1->mean, g2->mean);
    } else if (g1->mean == g2->mean) {
      r.value = std::abs(g1->sd - g2->sd) * gaussian_norm_moment(static_cast<unsigned>(mu.dim()), 1.0);
    } else {
      throw std::invalid_argument("closed-form Kantorovich distance needs equal sd or equal means; use samples");
    }
    return r;
  }
  if (is_atomic(mu) && is_atomic(nu)) return kantorovich_kd(mu, nu).distance;
  throw std::invalid_argument("Kantorovich distance in dimension >= 2 needs empirical representations");
}

// ------------------------------------------------------ KR and FM by LP duality

DiscreteMeasure lp_support(const Measure& m, const Discretization& disc) {
  DiscreteMeasure d = is_atomic(m) ? atoms_of(m) : continuous_quantile_atoms(m, disc.lp_atoms, disc.tail_mass);
  if (d.size() > kMaxLpSupport)
    throw std::invalid_argument("LP support has " + std::to_string(d.size()) + " atoms; the limit is " +
                                std::to_string(kMaxLpSupport));
  return d;
}

namespace {

// Min-cost flow for the signed atoms: moving mass along a path costs t per unit
// length, and creating or annihilating it through the ground node costs 1 - t per unit.
struct BoundedLipschitzGraph {
  DiscreteMeasure net;
  std::vector<std::size_t> pos, neg;
  std::vector<std::pair<std::size_t, std::size_t>> path_arcs;
  std::vector<double> path_length;

  explicit BoundedLipschitzGraph(DiscreteMeasure d) : net(std::move(d)) {
    for (std::size_t i = 0; i < net.size(); ++i) (net.weights[i] > 0 ? pos : neg).push_back(i);
    if (net.dim == 1) {
      std::vector<std::size_t> order(net.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return net.points[a] < net.points[b]; });
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        double len = net.points[order[k + 1]] - net.points[order[k]];
        path_arcs.emplace_back(order[k], order[k + 1]);
        path_length.push_back(len);
        path_arcs.emplace_back(order[k + 1], order[k]);
        path_length.push_back(len);
      }
    } else {
      for (std::size_t i : pos)
        for (std::size_t j : neg) {
          path_arcs.emplace_back(i, j);
          path_length.push_back(euclid(net.point(i), net.point(j)));
        }
    }
  }

  struct Solution {
    double value = 0.0;
    double path = 0.0;    // Σ flow · length on path arcs
    double ground = 0.0;  // Σ flow on ground arcs
    double dual = 0.0;
  };

  Solution solve(double path_cost, double ground_cost) const {
    std::size_t n = net.size(), ground = n;
    MinCostFlow mcf(n + 1);
    for (std::size_t i = 0; i < n; ++i) mcf.set_supply(i, net.weights[i]);
    for (std::size_t e = 0; e < path_arcs.size(); ++e)
      mcf.add_arc(path_arcs[e].first, path_arcs[e].second, path_cost * path_length[e]);
    for (std::size_t i : pos) mcf.add_arc(i, ground, ground_cost);
    for (std::size_t j : neg) mcf.add_arc(ground, j, ground_cost);
    auto sol = mcf.solve();
    Solution s;
    s.value = sol.cost;
    for (std::size_t e = 0; e < path_arcs.size(); ++e) s.path += sol.flow[e] * path_length[e];
    for (std::size_t e = path_arcs.size(); e < sol.flow.size(); ++e) s.ground += sol.flow[e];
    for (std::size_t i = 0; i < n; ++i) s.dual -= net.weights[i] * sol.potential[i];
    if (std::abs(s.dual - s.value) > 1e-9 * (1.0 + std::abs(s.value)))
      throw std::runtime_error("LP dual does not match the primal optimum");
    return s;
  }
};

BoundedLipschitzGraph lp_graph(const Measure& mu, const Measure& nu, const Discretization& disc) {
  require_same_dim(mu, nu);
  return BoundedLipschitzGraph(net_atoms({{1.0, lp_support(mu, disc)}, {-1.0, lp_support(nu, disc)}}));
}

DistanceResult lp_result(const char* metric, const Measure& mu, const Measure& nu, const Discretization& disc) {
  DistanceResult r{metric, 0.0, "", nullptr, first_seed(difference(mu, nu))};
  bool atomic = is_atomic(mu) && is_atomic(nu);
  r.representation = atomic ? "atoms" : "quantile-atoms";
  if (!atomic) r.grid = {{"lp_atoms", disc.lp_atoms}, {"tail_mass", disc.tail_mass}};
  return r;
}

constexpr std::size_t kMaxCuttingPlanes = 200;

}  // namespace

DistanceResult kr_distance(const Measure& mu, const Measure& nu, const Discretization& disc) {
  auto graph = lp_graph(mu, nu, disc);
  DistanceResult r = lp_result("kr", mu, nu, disc);
  if (graph.net.size() == 0) return r;
  auto s = graph.solve(1.0, 1.0);
  r.value = s.value;
  r.details["dual_value"] = s.dual;
  return r;
}

DistanceResult fm_distance(const Measure& mu, const Measure& nu, const Discretization& disc) {
  auto graph = lp_graph(mu, nu, disc);
  DistanceResult r = lp_result("fm", mu, nu, disc);
  if (graph.net.size() == 0) return r;
  // g(t) = min-cost flow at path cost t, ground cost 1 - t is concave and piecewise
  // linear; each solve yields a supporting line t*path + (1 - t)*ground. Maximize by
  // Kelley cutting planes on [0, 1].
  struct Line {
    double slope, intercept;
    double at(double t) const { return intercept + slope * t; }
  };
  std::vector<Line> lines;
  double best = -1.0, best_t = 0.0;
  auto evaluate = [&](double t) {
    auto s = graph.solve(t, 1.0 - t);
    lines.push_back({s.path - s.ground, s.ground});
    if (s.value > best) {
      best = s.value;
      best_t = t;
    }
  };
  evaluate(0.0);
  evaluate(1.0);
  std::size_t iterations = 0;
  for (; iterations < kMaxCuttingPlanes; ++iterations) {
    auto envelope = [&](double t) {
      double v = std::numeric_limits<double>::infinity();
      for (const auto& l : lines) v = std::min(v, l.at(t));
      return v;
    };
    double top_t = 0.0, top = envelope(0.0);
    std::vector<double> candidates{1.0};
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        double ds = lines[i].slope - lines[j].slope;
        if (ds == 0.0) continue;
        double t = (lines[j].intercept - lines[i].intercept) / ds;
        if (t > 0.0 && t < 1.0) candidates.push_back(t);
      }
    for (double t : candidates) {
      double v = envelope(t);
      if (v > top) {
        top = v;
        top_t = t;
      }
    }
    if (top - best <= 1e-12 * std::max(1.0, top)) break;
    evaluate(top_t);
  }
  r.value = best;
  r.details["t"] = best_t;
  r.details["s"] = 1.0 - best_t;
  r.details["cutting_planes"] = lines.size();
  return r;
}

// --------------------------------------------------------- densities, moments

double bv_norm(const GridDensity& rho) { return gpm::bv_norm(rho.function()); }

double lp_norm_of_density(const GridDensity& rho, double p) { return lp_norm(rho.function(), p); }

GridDensity density_grid(const Measure& m, const Discretization& disc) {
  Rendering rd = render(SignedMeasure{{1.0, m}}, disc);
  for (double& v : rd.grid.values) v = std::max(v, 0.0);
  return GridDensity(std::move(rd.grid));
}

MomentResult moment(const Measure& m, double p, const Discretization& disc) {
  if (!(p >= 0.0)) throw std::invalid_argument("moment order must be non-negative");
  if (auto law = m.exact_1d()) return {abs_moment(*law, p), false};
  const auto& rep = m.representation();
  if (const auto* s = std::get_if<SampleSet>(&rep)) return {sample_abs_moment(*s, p), false};
  if (const auto* d = std::get_if<DiscreteMeasure>(&rep)) {
    double v = 0.0, total = 0.0;
    std::vector<double> zero(d->dim, 0.0);
    for (std::size_t i = 0; i < d->size(); ++i) {
      v += d->weights[i] * std::pow(euclid(d->point(i), zero), p);
      total += d->weights[i];
    }
    return {v / total, false};
  }
  if (const auto* g = std::get_if<GaussianLaw>(&rep)) {
    if (std::all_of(g->mean.begin(), g->mean.end(), [](double x) { return x == 0.0; }))
      return {std::pow(g->sd, p) * gaussian_norm_moment(static_cast<unsigned>(g->dim()), p), false};
  }
  GridDensity rho = density_grid(m, disc);
  const auto& f = rho.function();
  double v = 0.0;
  if (f.dim() == 1) {
    for (std::size_t i = 0; i < f.axes[0].n; ++i) v += f.values[i] * std::pow(std::abs(f.axes[0].center(i)), p);
  } else {
    for (std::size_t i = 0; i < f.axes[0].n; ++i)
      for (std::size_t j = 0; j < f.axes[1].n; ++j)
        v += f.at(i, j) * std::pow(std::hypot(f.axes[0].center(i), f.axes[1].center(j)), p);
  }
  return {v * f.cell_volume(), rho.boundary_mass() > kTruncationFlag};
}

}  // namespace gpm

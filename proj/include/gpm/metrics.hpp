#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "gpm/measure.hpp"

namespace gpm {

// Result record shared by all distances. TV uses the full-variation convention (range [0, 2]).
struct DistanceResult {
  std::string metric;
  double value = 0.0;
  std::string representation;  // "exact-1d", "grid", "atoms", "network-simplex", "sinkhorn", "closed-form"
  nlohmann::json grid;         // discretization metadata; null when none was used
  std::optional<std::uint64_t> seed;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// ‖m‖_TV of a signed combination, with the representation used.
DistanceResult tv_norm(const SignedMeasure& m, const Discretization& disc = {});
DistanceResult tv_distance(const Measure& mu, const Measure& nu, const Discretization& disc = {});

// Largest outer-layer mass tolerated for grid-based Kantorovich distances.
inline constexpr double kMaxBoundaryMass = 1e-3;

// ∫|F_mu − F_nu| in one dimension.
DistanceResult kantorovich_1d(const Measure& mu, const Measure& nu, const Discretization& disc = {});

struct TransportPlan {
  std::size_t dim = 1;
  std::vector<double> source, target;  // row-major support points
  std::vector<double> source_weights, target_weights;
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;  // (i, j, weight)
  double cost = 0.0;

  // Max deviation of the plan's marginals from the input weights.
  double marginal_error() const;
  // Σ weight · |x_i − y_j| recomputed from the entries.
  double recomputed_cost() const;
  void write_csv(std::ostream& out) const;
};

struct KantorovichResult {
  DistanceResult distance;
  TransportPlan plan;
};

inline constexpr std::size_t kExactTransportMax = 2048;

// W1 between atomic measures (samples or weighted atoms) in any dimension. Exact
// network simplex up to n_max atoms per side, log-domain Sinkhorn above.
KantorovichResult kantorovich_kd(const Measure& mu, const Measure& nu, std::size_t n_max = kExactTransportMax);

// Dispatch: 1D → kantorovich_1d; isotropic Gaussian pairs with equal sd or equal mean
// in closed form; atomic measures → kantorovich_kd.
DistanceResult kantorovich(const Measure& mu, const Measure& nu, const Discretization& disc = {});

inline constexpr std::size_t kMaxLpSupport = 4096;

// Bounded-Lipschitz distances by LP duality on a common finite support: d_KR uses
// |φ| ≤ 1, Lip φ ≤ 1; d_FM uses |φ| ≤ s, Lip φ ≤ t, s + t ≤ 1.
DistanceResult kr_distance(const Measure& mu, const Measure& nu, const Discretization& disc = {});
DistanceResult fm_distance(const Measure& mu, const Measure& nu, const Discretization& disc = {});

// Finite support used for the LP distances: exact atoms, or quantile atoms of continuous 1D laws.
DiscreteMeasure lp_support(const Measure& m, const Discretization& disc = {});

double bv_norm(const GridDensity& rho);
double lp_norm_of_density(const GridDensity& rho, double p);
// Density grid of a measure of dimension ≤ 2 (KDE for samples).
GridDensity density_grid(const Measure& m, const Discretization& disc = {});

struct MomentResult {
  double value = 0.0;
  bool truncated = false;  // grid boundary mass above 1e-4
};
// E|X|^p with the Euclidean norm.
MomentResult moment(const Measure& m, double p, const Discretization& disc = {});

}  // namespace gpm

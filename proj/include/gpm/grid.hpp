#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace gpm {

struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 1;

  double width() const { return (hi - lo) / static_cast<double>(n); }
  double edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }
  double center(std::size_t i) const { return lo + width() * (static_cast<double>(i) + 0.5); }
  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

// Uniform axis of n cells covering [lo, hi] exactly.
GridAxis make_axis(double lo, double hi, std::size_t n);

// Piecewise-constant function on a uniform grid in dimension 1 or 2. Values are
// densities (per unit length or area); 2D values are stored x-major: index i*ny + j.
struct GridFunction {
  std::vector<GridAxis> axes;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(std::vector<GridAxis> axes);  // zero-filled

  std::size_t dim() const { return axes.size(); }
  double cell_volume() const;
  double integral() const;
  double l1_norm() const;
  double& at(std::size_t i) { return values[i]; }
  double& at(std::size_t i, std::size_t j) { return values[i * axes[1].n + j]; }
  double at(std::size_t i) const { return values[i]; }
  double at(std::size_t i, std::size_t j) const { return values[i * axes[1].n + j]; }
};

GridFunction operator-(const GridFunction& a, const GridFunction& b);  // same axes
GridFunction scaled(GridFunction g, double factor);

// Non-negative grid function normalized to unit mass.
class GridDensity {
 public:
  static constexpr double kNormalizationTolerance = 1e-6;

  // Normalizes; rejects negative values and zero mass.
  explicit GridDensity(GridFunction g);

  const GridFunction& function() const { return grid_; }
  const std::vector<GridAxis>& axes() const { return grid_.axes; }
  const std::vector<double>& values() const { return grid_.values; }
  std::size_t dim() const { return grid_.dim(); }
  // Mass carried by the outermost cell layer, used to flag truncated tails.
  double boundary_mass() const;

 private:
  GridFunction grid_;
};

// ‖g − g(· − shift)‖_L1 computed exactly for the step function g.
double shift_l1(const GridFunction& g, std::span<const double> shift);

// Exact convolution of the step function with N(0, eps^2 I), on an extended grid.
GridFunction convolve_gaussian(const GridFunction& g, double eps, double extend_sds = 8.0);

// Exact re-binning of a step function onto other axes (mass preserving inside overlap).
GridFunction remap(const GridFunction& g, const std::vector<GridAxis>& axes);

// Discrete total variation: sum of |jumps| including the jumps to zero at both ends.
double bv_norm(const GridFunction& g);
double lp_norm(const GridFunction& g, double p);
// ∫|G| where G is the running integral of a 1D signed step function.
double cdf_l1(const GridFunction& g);

nlohmann::json to_json(const GridDensity& g);
GridDensity grid_density_from_json(const nlohmann::json& j);

}  // namespace gpm

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gpm/grid.hpp"
#include "gpm/laws.hpp"
#include "gpm/sampling.hpp"

namespace gpm {

// Weighted atoms in R^dim; weights need not be normalized.
struct DiscreteMeasure {
  std::size_t dim = 1;
  std::vector<double> points;  // row-major
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(points).subspan(i * dim, dim);
  }
  static DiscreteMeasure from_samples(const SampleSet& s);
};

using Representation =
    std::variant<GaussianLaw, MonomialPowerLaw, PolynomialLaw, GridDensity, SampleSet, DiscreteMeasure>;

class Measure {
 public:
  explicit Measure(Representation r, std::string provenance = "");

  static Measure gaussian(double mean, double sd);
  static Measure gaussian(std::vector<double> mean, double sd);
  static Measure monomial_power(unsigned degree, double shift);
  // Exact law when p is univariate in one variable; errors on constants.
  static Measure law_of(const Polynomial& p);

  std::size_t dim() const;
  const Representation& representation() const { return rep_; }
  const std::string& provenance() const { return provenance_; }
  // "closed-form", "grid", "empirical" or "discrete".
  std::string kind() const;
  bool is_closed_form() const { return kind() == "closed-form"; }
  std::optional<ExactLaw1D> exact_1d() const;
  Measure shifted(std::span<const double> h) const;
  Measure shifted(double h) const { return shifted(std::span<const double>(&h, 1)); }

 private:
  Representation rep_;
  std::string provenance_;
};

// Finite signed combination sum_j weight_j * measure_j.
using SignedMeasure = std::vector<std::pair<double, Measure>>;

SignedMeasure difference(const Measure& a, const Measure& b);
SignedMeasure shifted(const SignedMeasure& m, std::span<const double> h);

// Discretization policy for grid renderings and LP supports; recorded in reports.
struct Discretization {
  std::size_t cells_1d = 1 << 14;
  std::size_t cells_2d = 256;
  double tail_mass = 1e-12;  // closed-form truncation window
  std::optional<std::vector<GridAxis>> axes;
  KdeOptions kde;
  std::size_t lp_atoms = 2048;  // per-measure support size for KR / FM on continuous laws

  nlohmann::json to_json() const;
};

struct Rendering {
  GridFunction grid;  // signed density on shared axes
  std::vector<double> bandwidth;  // shared KDE bandwidth when empirical parts are present
  double boundary_mass = 0.0;     // max over components of mass in the outer cell layer
  nlohmann::json metadata() const;
};

// Axes covering every component (closed-form windows, grid axes, padded sample ranges).
std::vector<GridAxis> shared_axes(const SignedMeasure& m, const Discretization& disc);
Rendering render(const SignedMeasure& m, const Discretization& disc);
Rendering render(const SignedMeasure& m, const std::vector<GridAxis>& axes, const Discretization& disc);

// True when every component is a one-dimensional closed-form law.
bool all_exact_1d(const SignedMeasure& m);
bool all_discrete(const SignedMeasure& m);

// Exact total variation of a signed combination of one-dimensional closed-form laws:
// sign changes of the density are located and masses taken from distribution functions.
double tv_norm_exact_1d(const std::vector<std::pair<double, ExactLaw1D>>& parts, double tail_mass);
// ∫|F| for the distribution function F of a signed combination of closed-form 1D laws.
double cdf_l1_exact_1d(const std::vector<std::pair<double, ExactLaw1D>>& parts, double tail_mass);

std::vector<std::pair<double, ExactLaw1D>> exact_parts(const SignedMeasure& m);

}  // namespace gpm

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpm/measure.hpp"

namespace gpm {

// ‖m − m_{h e}‖_TV along one unit direction e for a grid of positive shifts h.
struct ShiftProfile {
  std::vector<double> direction;
  std::vector<double> h;
  std::vector<double> tv;
  std::string representation;  // "exact-1d", "closed-form-grid" or "grid"
  double resolution = 0.0;     // grid cell width; 0 for exact profiles
  double noise_floor = 0.0;
  nlohmann::json metadata;

  void write_csv(std::ostream& out) const;  // header "h,tv"
  nlohmann::json to_json() const;
};

// Log-spaced shifts with per_decade points per decade, both ends included.
std::vector<double> log_grid(double lo, double hi, std::size_t per_decade = 40);
// Default seminorm grid: 40 points per decade on [1e-4, 10].
std::vector<double> default_shift_grid();

ShiftProfile shift_tv_profile(const SignedMeasure& m, std::span<const double> direction, const std::vector<double>& h,
                              const Discretization& disc = {});
ShiftProfile shift_tv_profile(const Measure& m, std::span<const double> direction, const std::vector<double>& h,
                              const Discretization& disc = {});
// One profile per direction: {+1} for k = 1; n_directions unit vectors on the half circle for
// k = 2 (opposite directions give the same total variation).
std::vector<ShiftProfile> direction_profiles(const SignedMeasure& m, const std::vector<double>& h,
                                             const Discretization& disc = {}, std::size_t n_directions = 16);

struct Seminorm {
  double value = 0.0;  // lower bound: max of tv / h^alpha over the sampled shifts
  double h = 0.0;
  std::vector<double> direction;
};
Seminorm besov_seminorm(const ShiftProfile& profile, double alpha);
Seminorm besov_seminorm(const std::vector<ShiftProfile>& profiles, double alpha);
// Seminorm over default shifts and directions.
Seminorm besov_seminorm(const SignedMeasure& m, double alpha, const Discretization& disc = {});

struct FitWindow {
  std::optional<double> h_lo, h_hi;  // default: the two smallest decades above the resolution floor
  double decades = 2.0;
  double resolution_factor = 2.0;  // drop h below this many cell widths
  double noise_factor = 5.0;       // drop tv below this multiple of the noise floor
};

struct OrderFit {
  double alpha_hat = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
  double h_lo = 0.0, h_hi = 0.0;
  nlohmann::json to_json() const;
};
OrderFit besov_order_fit(const ShiftProfile& profile, const FitWindow& window = {});

// ν * γ^ε on an extended grid (k ≤ 2), renormalized.
GridDensity gaussian_smooth(const Measure& m, double eps, const Discretization& disc = {});

// 1 + E|X|^alpha for X ~ γ_k, by radial quadrature of the chi density.
double hll_constant(unsigned k, double alpha);
// (2π)^{-k/2} + E|X|^alpha, the constant of the set bound.
double hll_set_constant(unsigned k, double alpha);

struct SmoothingSplit {
  double eps = 0.0;
  double term_smooth_gap = 0.0;    // ‖(σ−ν) − (σ−ν)*γ^ε‖_TV
  double bound_smooth_gap = 0.0;   // ε^α ‖σ−ν‖_{B^α} E|x|^α
  double term_smoothed_tv = 0.0;   // ‖σ*γ^ε − ν*γ^ε‖_TV
  double bound_smoothed_tv = 0.0;  // d_K / ε
  double seminorm = 0.0;
  double kantorovich = 0.0;
  nlohmann::json to_json() const;
};
SmoothingSplit smoothing_split(const Measure& sigma, const Measure& nu, double eps, double alpha,
                               const Discretization& disc = {});
// ε = (d_K / ‖σ−ν‖_{B^α})^{1/(1+α)}.
double balancing_eps(double kantorovich, double seminorm, double alpha);

}  // namespace gpm

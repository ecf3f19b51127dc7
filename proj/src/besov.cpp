#include "gpm/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gpm/metrics.hpp"
#include "gpm/parallel.hpp"
#include "gpm/special.hpp"

namespace gpm {

void ShiftProfile::write_csv(std::ostream& out) const {
  auto old = out.precision(17);
  out << "h,tv\n";
  for (std::size_t i = 0; i < h.size(); ++i) out << h[i] << ',' << tv[i] << '\n';
  out.precision(old);
}

nlohmann::json ShiftProfile::to_json() const {
  return {{"direction", direction}, {"h", h},           {"tv", tv},          {"representation", representation},
          {"resolution", resolution}, {"noise_floor", noise_floor}, {"metadata", metadata}};
}

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade == 0) throw std::invalid_argument("log_grid needs 0 < lo <= hi");
  double decades = std::log10(hi / lo);
  auto n = static_cast<std::size_t>(std::llround(decades * static_cast<double>(per_decade)));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i)
    out.push_back(n == 0 ? lo : lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n)));
  return out;
}

std::vector<double> default_shift_grid() { return log_grid(1e-4, 10.0, 40); }

namespace {

std::vector<double> unit(std::span<const double> d) {
  double n = 0.0;
  for (double v : d) n += v * v;
  n = std::sqrt(n);
  if (!(n > 0.0)) throw std::invalid_argument("shift direction must be nonzero");
  std::vector<double> out(d.begin(), d.end());
  for (double& v : out) v /= n;
  return out;
}

bool all_gaussian(const SignedMeasure& m) {
  return std::all_of(m.begin(), m.end(),
                     [](const auto& p) { return std::holds_alternative<GaussianLaw>(p.second.representation()); });
}

SignedMeasure minus_shifted(const SignedMeasure& m, std::span<const double> s) {
  SignedMeasure out = m;
  for (const auto& [w, part] : m) out.emplace_back(-w, part.shifted(s));
  return out;
}

}  // namespace

ShiftProfile shift_tv_profile(const SignedMeasure& m, std::span<const double> direction, const std::vector<double>& h,
                              const Discretization& disc) {
  if (m.empty()) throw std::invalid_argument("shift profile of an empty combination");
  std::size_t k = m.front().second.dim();
  if (direction.size() != k) throw std::invalid_argument("direction dimension does not match measure");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!(h[i] >= 0.0) || (i > 0 && h[i] < h[i - 1])) throw std::invalid_argument("shifts must be non-negative and sorted");
  ShiftProfile p;
  p.direction = unit(direction);
  p.h = h;
  p.tv.assign(h.size(), 0.0);
  p.metadata = disc.to_json();
  auto step = [&](double hi) {
    std::vector<double> s(k);
    for (std::size_t j = 0; j < k; ++j) s[j] = hi * p.direction[j];
    return s;
  };

  if (all_exact_1d(m)) {
    p.representation = "exact-1d";
    auto parts = exact_parts(m);
    parallel_chunks(h.size(), [&](std::size_t i) {
      if (h[i] == 0.0) return;
      auto all = parts;
      for (const auto& [w, law] : parts) all.emplace_back(-w, shifted(law, h[i] * p.direction[0]));
      p.tv[i] = tv_norm_exact_1d(all, disc.tail_mass);
    });
    return p;
  }

  if (all_gaussian(m)) {
    // Closed forms are rendered afresh at every shift on axes covering all shifted copies.
    p.representation = "closed-form-grid";
    double top = h.empty() ? 0.0 : h.back();
    auto axes = disc.axes ? *disc.axes : shared_axes(minus_shifted(m, step(top)), disc);
    for (const auto& a : axes) p.resolution = std::max(p.resolution, a.width());
    p.metadata["grid"] = Rendering{GridFunction(axes), {}, 0.0}.metadata()["grid"];
    parallel_chunks(h.size(), [&](std::size_t i) {
      if (h[i] == 0.0) return;
      p.tv[i] = render(minus_shifted(m, step(h[i])), axes, disc).grid.l1_norm();
    });
    return p;
  }

  p.representation = "grid";
  Rendering rd = render(m, disc);
  for (const auto& a : rd.grid.axes) p.resolution = std::max(p.resolution, a.width());
  p.noise_floor = 1e-12 * std::max(rd.grid.l1_norm(), 1.0);
  p.metadata["grid"] = rd.metadata();
  parallel_chunks(h.size(), [&](std::size_t i) {
    auto s = step(h[i]);
    p.tv[i] = shift_l1(rd.grid, s);
  });
  return p;
}

ShiftProfile shift_tv_profile(const Measure& m, std::span<const double> direction, const std::vector<double>& h,
                              const Discretization& disc) {
  return shift_tv_profile(SignedMeasure{{1.0, m}}, direction, h, disc);
}

std::vector<ShiftProfile> direction_profiles(const SignedMeasure& m, const std::vector<double>& h,
                                             const Discretization& disc, std::size_t n_directions) {
  if (m.empty()) throw std::invalid_argument("shift profile of an empty combination");
  std::size_t k = m.front().second.dim();
  if (k == 1) {
    double e = 1.0;
    return {shift_tv_profile(m, std::span<const double>(&e, 1), h, disc)};
  }
  if (k != 2) throw std::invalid_argument("shift profiles support dimension 1 or 2");
  std::vector<ShiftProfile> out;
  for (std::size_t d = 0; d < n_directions; ++d) {
    double angle = std::numbers::pi * static_cast<double>(d) / static_cast<double>(n_directions);
    std::vector<double> e{std::cos(angle), std::sin(angle)};
    out.push_back(shift_tv_profile(m, e, h, disc));
  }
  return out;
}

Seminorm besov_seminorm(const ShiftProfile& profile, double alpha) {
  return besov_seminorm(std::vector<ShiftProfile>{profile}, alpha);
}

Seminorm besov_seminorm(const std::vector<ShiftProfile>& profiles, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  Seminorm best;
  bool any = false;
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < p.h.size(); ++i) {
      if (p.h[i] <= 0.0) continue;
      double v = p.tv[i] / std::pow(p.h[i], alpha);
      if (!any || v > best.value) best = {v, p.h[i], p.direction};
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("empty shift profile");
  return best;
}

Seminorm besov_seminorm(const SignedMeasure& m, double alpha, const Discretization& disc) {
  return besov_seminorm(direction_profiles(m, default_shift_grid(), disc), alpha);
}

nlohmann::json OrderFit::to_json() const {
  return {{"alpha_hat", alpha_hat}, {"slope_stderr", slope_stderr}, {"intercept", intercept},
          {"n_points", n_points},   {"h_lo", h_lo},                 {"h_hi", h_hi}};
}

OrderFit besov_order_fit(const ShiftProfile& profile, const FitWindow& window) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < profile.h.size(); ++i) {
    double h = profile.h[i], tv = profile.tv[i];
    if (!(h > 0.0) || !(tv > 0.0)) continue;
    if (h < window.resolution_factor * profile.resolution) continue;
    if (tv < window.noise_factor * profile.noise_floor) continue;
    keep.push_back(i);
  }
  if (keep.empty()) throw std::invalid_argument("fit window is empty after resolution and noise filtering");
  double lo = window.h_lo.value_or(profile.h[keep.front()]);
  double hi = window.h_hi.value_or(lo * std::pow(10.0, window.decades));
  std::vector<double> x, y;
  for (std::size_t i : keep) {
    if (profile.h[i] < lo * (1 - 1e-12) || profile.h[i] > hi * (1 + 1e-12)) continue;
    x.push_back(std::log(profile.h[i]));
    y.push_back(std::log(profile.tv[i]));
  }
  if (x.size() < 5) throw std::invalid_argument("fit window holds fewer than 5 points");
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) throw std::invalid_argument("degenerate fit window: all tv values equal");
  OrderFit fit;
  fit.alpha_hat = sxy / sxx;
  fit.intercept = my - fit.alpha_hat * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - fit.intercept - fit.alpha_hat * x[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  fit.n_points = x.size();
  fit.h_lo = std::exp(x.front());
  fit.h_hi = std::exp(x.back());
  return fit;
}

GridDensity gaussian_smooth(const Measure& m, double eps, const Discretization& disc) {
  if (!(eps > 0.0)) throw std::invalid_argument("smoothing scale must be positive");
  if (const auto* d = std::get_if<DiscreteMeasure>(&m.representation())) {
    // Mixture of Gaussians centered at the atoms, rendered by exact cell masses.
    if (d->dim > 2) throw std::invalid_argument("grid output supports dimension 1 or 2");
    double z = -normal_quantile(0.5 * disc.tail_mass);
    std::vector<GridAxis> axes;
    for (std::size_t j = 0; j < d->dim; ++j) {
      double lo = d->points[j], hi = d->points[j];
      for (std::size_t i = 0; i < d->size(); ++i) {
        lo = std::min(lo, d->point(i)[j]);
        hi = std::max(hi, d->point(i)[j]);
      }
      axes.push_back(make_axis(lo - z * eps, hi + z * eps, d->dim == 1 ? disc.cells_1d : disc.cells_2d));
    }
    SignedMeasure mix;
    for (std::size_t i = 0; i < d->size(); ++i) {
      auto p = d->point(i);
      mix.emplace_back(d->weights[i], Measure(GaussianLaw{std::vector<double>(p.begin(), p.end()), eps}, "atom"));
    }
    return GridDensity(render(mix, axes, disc).grid);
  }
  GridDensity rho = density_grid(m, disc);
  GridFunction g = convolve_gaussian(rho.function(), eps);
  for (double& v : g.values) v = std::max(v, 0.0);
  return GridDensity(std::move(g));
}

double hll_constant(unsigned k, double alpha) {
  if (k == 0) throw std::invalid_argument("dimension must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  // E|X|^α = ∫ r^α χ_k(r) dr, χ_k(r) = r^{k−1} e^{−r²/2} / (2^{k/2−1} Γ(k/2)).
  double kd = static_cast<double>(k);
  double log_norm = (1.0 - kd / 2.0) * std::log(2.0) - std::lgamma(kd / 2.0);
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    return std::exp((alpha + kd - 1.0) * std::log(r) - 0.5 * r * r + log_norm);
  };
  boost::math::quadrature::tanh_sinh<double> near;
  boost::math::quadrature::exp_sinh<double> far;
  double split = std::sqrt(std::max(kd - 1.0 + alpha, 1.0));  // mode of the integrand
  return 1.0 + near.integrate(integrand, 0.0, split, 1e-15) + far.integrate(integrand, split, std::numeric_limits<double>::infinity(), 1e-15);
}

double hll_set_constant(unsigned k, double alpha) {
  return std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(k)) + hll_constant(k, alpha) - 1.0;
}

double balancing_eps(double kantorovich, double seminorm, double alpha) {
  if (!(kantorovich > 0.0) || !(seminorm > 0.0)) throw std::invalid_argument("balancing needs positive d_K and seminorm");
  return std::pow(kantorovich / seminorm, 1.0 / (1.0 + alpha));
}

nlohmann::json SmoothingSplit::to_json() const {
  return {{"eps", eps},
          {"term_smooth_gap", term_smooth_gap},
          {"bound_smooth_gap", bound_smooth_gap},
          {"term_smoothed_tv", term_smoothed_tv},
          {"bound_smoothed_tv", bound_smoothed_tv},
          {"seminorm", seminorm},
          {"kantorovich", kantorovich}};
}

SmoothingSplit smoothing_split(const Measure& sigma, const Measure& nu, double eps, double alpha,
                               const Discretization& disc) {
  if (!(eps > 0.0)) throw std::invalid_argument("smoothing scale must be positive");
  SmoothingSplit s;
  s.eps = eps;
  SignedMeasure diff = difference(sigma, nu);
  GridFunction d = render(diff, disc).grid;
  GridFunction smoothed = convolve_gaussian(d, eps);
  GridFunction embedded = remap(d, smoothed.axes);
  s.term_smooth_gap = (embedded - smoothed).l1_norm();
  s.term_smoothed_tv = smoothed.l1_norm();
  s.seminorm = besov_seminorm(diff, alpha, disc).value;
  s.kantorovich = kantorovich(sigma, nu, disc).value;
  s.bound_smooth_gap = std::pow(eps, alpha) * s.seminorm * (hll_constant(static_cast<unsigned>(sigma.dim()), alpha) - 1.0);
  s.bound_smoothed_tv = s.kantorovich / eps;
  return s;
}

}  // namespace gpm

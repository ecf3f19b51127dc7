#include "gpm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gpm/special.hpp"

namespace gpm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

constexpr double kSamplePadding = 4.0;  // bandwidths

}  // namespace

DiscreteMeasure DiscreteMeasure::from_samples(const SampleSet& s) {
  return DiscreteMeasure{s.dim, s.values, std::vector<double>(s.size(), 1.0 / static_cast<double>(s.size()))};
}

Measure::Measure(Representation r, std::string provenance) : rep_(std::move(r)), provenance_(std::move(provenance)) {
  if (auto* g = std::get_if<GaussianLaw>(&rep_)) {
    if (g->mean.empty() || !(g->sd > 0.0)) throw std::invalid_argument("Gaussian law needs a mean and sd > 0");
  }
  if (auto* m = std::get_if<MonomialPowerLaw>(&rep_)) {
    if (m->degree == 0) throw std::invalid_argument("monomial law needs degree >= 1");
  }
  if (auto* d = std::get_if<DiscreteMeasure>(&rep_)) {
    if (d->dim == 0 || d->points.size() != d->dim * d->weights.size() || d->weights.empty())
      throw std::invalid_argument("discrete measure: points and weights disagree");
  }
  if (auto* s = std::get_if<SampleSet>(&rep_)) {
    if (s->size() == 0) throw std::invalid_argument("empirical measure needs at least one sample");
  }
  if (provenance_.empty()) {
    if (auto law = exact_1d()) provenance_ = describe(*law);
    else provenance_ = kind();
  }
}

Measure Measure::gaussian(double mean, double sd) { return Measure(GaussianLaw{{mean}, sd}); }

Measure Measure::gaussian(std::vector<double> mean, double sd) {
  std::string prov = "gauss" + (mean.size() == 1 ? std::string() : std::to_string(mean.size())) + "(";
  for (double m : mean) prov += number(m) + ",";
  prov += number(sd) + ")";
  return Measure(GaussianLaw{std::move(mean), sd}, prov);
}

Measure Measure::monomial_power(unsigned degree, double shift) { return Measure(MonomialPowerLaw{degree, shift}); }

Measure Measure::law_of(const Polynomial& p) { return Measure(PolynomialLaw(p)); }

std::size_t Measure::dim() const {
  return std::visit(Overloaded{[](const GaussianLaw& g) { return g.dim(); },
                               [](const MonomialPowerLaw&) { return std::size_t{1}; },
                               [](const PolynomialLaw&) { return std::size_t{1}; },
                               [](const GridDensity& g) { return g.dim(); },
                               [](const SampleSet& s) { return s.dim; },
                               [](const DiscreteMeasure& d) { return d.dim; }},
                    rep_);
}

std::string Measure::kind() const {
  return std::visit(Overloaded{[](const GridDensity&) { return std::string("grid"); },
                               [](const SampleSet&) { return std::string("empirical"); },
                               [](const DiscreteMeasure&) { return std::string("discrete"); },
                               [](const auto&) { return std::string("closed-form"); }},
                    rep_);
}

std::optional<ExactLaw1D> Measure::exact_1d() const {
  return std::visit(Overloaded{[](const GaussianLaw& g) -> std::optional<ExactLaw1D> {
                                 if (g.dim() == 1) return ExactLaw1D(g);
                                 return std::nullopt;
                               },
                               [](const MonomialPowerLaw& m) -> std::optional<ExactLaw1D> { return ExactLaw1D(m); },
                               [](const PolynomialLaw& p) -> std::optional<ExactLaw1D> { return ExactLaw1D(p); },
                               [](const auto&) -> std::optional<ExactLaw1D> { return std::nullopt; }},
                    rep_);
}

Measure Measure::shifted(std::span<const double> h) const {
  if (h.size() != dim()) throw std::invalid_argument("shift dimension does not match measure");
  std::string prov = "shift(" + provenance_;
  for (double v : h) prov += "," + number(v);
  prov += ")";
  Representation out = std::visit(
      Overloaded{[&](const GaussianLaw& g) -> Representation {
                   GaussianLaw s = g;
                   for (std::size_t j = 0; j < h.size(); ++j) s.mean[j] += h[j];
                   return s;
                 },
                 [&](const MonomialPowerLaw& m) -> Representation { return MonomialPowerLaw{m.degree, m.shift - h[0]}; },
                 [&](const PolynomialLaw& p) -> Representation { return p.shifted(h[0]); },
                 [&](const GridDensity& g) -> Representation {
                   GridFunction f = g.function();
                   for (std::size_t j = 0; j < h.size(); ++j) {
                     f.axes[j].lo += h[j];
                     f.axes[j].hi += h[j];
                   }
                   return GridDensity(std::move(f));
                 },
                 [&](const SampleSet& s) -> Representation {
                   SampleSet t = s;
                   for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] += h[i % t.dim];
                   return t;
                 },
                 [&](const DiscreteMeasure& d) -> Representation {
                   DiscreteMeasure t = d;
                   for (std::size_t i = 0; i < t.points.size(); ++i) t.points[i] += h[i % t.dim];
                   return t;
                 }},
      rep_);
  return Measure(std::move(out), prov);
}

SignedMeasure difference(const Measure& a, const Measure& b) { return {{1.0, a}, {-1.0, b}}; }

SignedMeasure shifted(const SignedMeasure& m, std::span<const double> h) {
  SignedMeasure out;
  for (const auto& [w, part] : m) out.emplace_back(w, part.shifted(h));
  return out;
}

nlohmann::json Discretization::to_json() const {
  nlohmann::json j{{"cells_1d", cells_1d}, {"cells_2d", cells_2d}, {"tail_mass", tail_mass}, {"lp_atoms", lp_atoms}};
  if (kde.bandwidth) j["bandwidth"] = *kde.bandwidth;
  return j;
}

nlohmann::json Rendering::metadata() const {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : grid.axes) axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}});
  nlohmann::json j{{"grid", axes}, {"boundary_mass", boundary_mass}};
  if (!bandwidth.empty()) j["kde_bandwidth"] = bandwidth;
  return j;
}

bool all_exact_1d(const SignedMeasure& m) {
  return !m.empty() && std::all_of(m.begin(), m.end(), [](const auto& p) { return p.second.exact_1d().has_value(); });
}

bool all_discrete(const SignedMeasure& m) {
  return !m.empty() && std::all_of(m.begin(), m.end(), [](const auto& p) {
    return std::holds_alternative<SampleSet>(p.second.representation()) ||
           std::holds_alternative<DiscreteMeasure>(p.second.representation());
  });
}

std::vector<std::pair<double, ExactLaw1D>> exact_parts(const SignedMeasure& m) {
  std::vector<std::pair<double, ExactLaw1D>> out;
  for (const auto& [w, part] : m) {
    auto law = part.exact_1d();
    if (!law) throw std::invalid_argument("measure is not a one-dimensional closed-form law");
    out.emplace_back(w, *law);
  }
  return out;
}

namespace {

std::size_t common_dim(const SignedMeasure& m) {
  if (m.empty()) throw std::invalid_argument("empty signed measure");
  std::size_t k = m.front().second.dim();
  for (const auto& p : m)
    if (p.second.dim() != k) throw std::invalid_argument("measures have incompatible dimensions");
  return k;
}

// Shared KDE bandwidth: explicit override, else the rule applied to the first empirical part.
std::vector<double> shared_bandwidth(const SignedMeasure& m, const Discretization& disc, std::size_t k) {
  for (const auto& p : m) {
    const auto* s = std::get_if<SampleSet>(&p.second.representation());
    if (!s) continue;
    std::vector<double> bw;
    for (std::size_t j = 0; j < k; ++j) {
      auto c = s->coordinate(j);
      if (k == 1) bw.push_back(disc.kde.bandwidth.value_or(silverman_bandwidth(c)));
      else bw.push_back(disc.kde.bandwidth_2d ? (*disc.kde.bandwidth_2d)[j] : scott_bandwidth_2d(c));
      if (!(bw.back() > 0.0)) throw std::invalid_argument("zero-variance sample (law is a point mass)");
    }
    return bw;
  }
  return {};
}

}  // namespace

std::vector<GridAxis> shared_axes(const SignedMeasure& m, const Discretization& disc) {
  std::size_t k = common_dim(m);
  if (k > 2) throw std::invalid_argument("grid renderings support dimension 1 or 2");
  if (disc.axes) return *disc.axes;
  auto bw = shared_bandwidth(m, disc, k);
  std::vector<double> lo(k, std::numeric_limits<double>::infinity()), hi(k, -std::numeric_limits<double>::infinity());
  double z = -normal_quantile(0.5 * disc.tail_mass);
  for (const auto& [w, part] : m) {
    std::visit(Overloaded{[&](const GaussianLaw& g) {
                            for (std::size_t j = 0; j < k; ++j) {
                              lo[j] = std::min(lo[j], g.mean[j] - z * g.sd);
                              hi[j] = std::max(hi[j], g.mean[j] + z * g.sd);
                            }
                          },
                          [&](const GridDensity& g) {
                            for (std::size_t j = 0; j < k; ++j) {
                              lo[j] = std::min(lo[j], g.axes()[j].lo);
                              hi[j] = std::max(hi[j], g.axes()[j].hi);
                            }
                          },
                          [&](const SampleSet& s) {
                            for (std::size_t j = 0; j < k; ++j) {
                              auto c = s.coordinate(j);
                              auto [mn, mx] = std::minmax_element(c.begin(), c.end());
                              lo[j] = std::min(lo[j], *mn - kSamplePadding * bw[j]);
                              hi[j] = std::max(hi[j], *mx + kSamplePadding * bw[j]);
                            }
                          },
                          [&](const DiscreteMeasure&) {
                            throw std::invalid_argument("atomic measures have no density; use an empirical or grid form");
                          },
                          [&](const auto&) {
                            auto [a, b] = window(*part.exact_1d(), disc.tail_mass);
                            lo[0] = std::min(lo[0], a);
                            hi[0] = std::max(hi[0], b);
                          }},
               part.representation());
  }
  std::vector<GridAxis> axes;
  for (std::size_t j = 0; j < k; ++j) axes.push_back(make_axis(lo[j], hi[j], k == 1 ? disc.cells_1d : disc.cells_2d));
  return axes;
}

namespace {

std::vector<double> cell_masses(const ExactLaw1D& law, const GridAxis& a) {
  std::vector<double> out(a.n);
  double prev = cdf(law, a.lo);
  for (std::size_t i = 0; i < a.n; ++i) {
    double next = cdf(law, a.edge(i + 1));
    out[i] = next - prev;
    prev = next;
  }
  return out;
}

double outer_layer_mass(const GridFunction& g) {
  double s = 0.0;
  if (g.dim() == 1) {
    s = std::abs(g.values.front()) + std::abs(g.values.back());
  } else {
    std::size_t nx = g.axes[0].n, ny = g.axes[1].n;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) s += std::abs(g.at(i, j));
  }
  return s * g.cell_volume();
}

}  // namespace

Rendering render(const SignedMeasure& m, const Discretization& disc) { return render(m, shared_axes(m, disc), disc); }

Rendering render(const SignedMeasure& m, const std::vector<GridAxis>& axes, const Discretization& disc) {
  std::size_t k = common_dim(m);
  if (axes.size() != k) throw std::invalid_argument("render: axes dimension mismatch");
  Rendering out{GridFunction(axes), shared_bandwidth(m, disc, k), 0.0};
  for (const auto& [w, part] : m) {
    GridFunction g = std::visit(
        Overloaded{[&](const GaussianLaw& law) {
                     GridFunction r(axes);
                     std::vector<std::vector<double>> masses;
                     for (std::size_t j = 0; j < k; ++j)
                       masses.push_back(cell_masses(GaussianLaw{{law.mean[j]}, law.sd}, axes[j]));
                     double vol = r.cell_volume();
                     if (k == 1) {
                       for (std::size_t i = 0; i < axes[0].n; ++i) r.values[i] = masses[0][i] / vol;
                     } else {
                       for (std::size_t i = 0; i < axes[0].n; ++i)
                         for (std::size_t j = 0; j < axes[1].n; ++j) r.at(i, j) = masses[0][i] * masses[1][j] / vol;
                     }
                     return r;
                   },
                   [&](const GridDensity& g) {
                     // Remapping pads the grid, so a truncated input shows up only in its own outer layer.
                     out.boundary_mass = std::max(out.boundary_mass, g.boundary_mass());
                     return remap(g.function(), axes);
                   },
                   [&](const SampleSet& s) {
                     KdeOptions opt = disc.kde;
                     opt.axes = axes;
                     if (k == 1) opt.bandwidth = out.bandwidth[0];
                     else opt.bandwidth_2d = std::array<double, 2>{out.bandwidth[0], out.bandwidth[1]};
                     return kde(s, opt).density;
                   },
                   [&](const DiscreteMeasure&) -> GridFunction {
                     throw std::invalid_argument("atomic measures have no density; use an empirical or grid form");
                   },
                   [&](const auto&) {
                     GridFunction r(axes);
                     auto masses = cell_masses(*part.exact_1d(), axes[0]);
                     for (std::size_t i = 0; i < axes[0].n; ++i) r.values[i] = masses[i] / axes[0].width();
                     return r;
                   }},
        part.representation());
    out.boundary_mass = std::max(out.boundary_mass, outer_layer_mass(g));
    for (std::size_t i = 0; i < g.values.size(); ++i) out.grid.values[i] += w * g.values[i];
  }
  return out;
}

// ------------------------------------------------------------ exact 1D engine

namespace {

std::vector<double> exact_breaks(const std::vector<std::pair<double, ExactLaw1D>>& parts, double tail_mass,
                                 double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const auto& [w, law] : parts) {
    auto [a, b] = window(law, tail_mass);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  std::vector<double> breaks{lo, hi};
  for (const auto& [w, law] : parts)
    for (double s : singular_points(law))
      if (s > lo && s < hi) breaks.push_back(s);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

double signed_cdf(const std::vector<std::pair<double, ExactLaw1D>>& parts, double t) {
  double s = 0.0;
  for (const auto& [w, law] : parts) s += w * cdf(law, t);
  return s;
}

}  // namespace

double tv_norm_exact_1d(const std::vector<std::pair<double, ExactLaw1D>>& parts, double tail_mass) {
  if (parts.empty()) return 0.0;
  double lo, hi;
  auto breaks = exact_breaks(parts, tail_mass, lo, hi);
  auto signed_density = [&](double t) {
    double s = 0.0;
    for (const auto& [w, law] : parts) s += w * density(law, t);
    return s;
  };
  auto crossings = find_crossings(signed_density, breaks);
  breaks.insert(breaks.end(), crossings.begin(), crossings.end());
  std::sort(breaks.begin(), breaks.end());
  double total = std::abs(signed_cdf(parts, lo));
  double prev = signed_cdf(parts, breaks.front());
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    double next = signed_cdf(parts, breaks[i]);
    total += std::abs(next - prev);
    prev = next;
  }
  double right = 0.0;
  for (const auto& [w, law] : parts) right += w * (1.0 - cdf(law, hi));
  return total + std::abs(right);
}

double cdf_l1_exact_1d(const std::vector<std::pair<double, ExactLaw1D>>& parts, double tail_mass) {
  if (parts.empty()) return 0.0;
  double lo, hi;
  auto breaks = exact_breaks(parts, tail_mass, lo, hi);
  auto f = [&](double t) { return signed_cdf(parts, t); };
  auto crossings = find_crossings(f, breaks);
  breaks.insert(breaks.end(), crossings.begin(), crossings.end());
  std::sort(breaks.begin(), breaks.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    total += std::abs(integrator.integrate(f, a, b, 1e-13));
  }
  return total;
}

}  // namespace gpm

#include "gpm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gpm/besov.hpp"
#include "gpm/malliavin.hpp"
#include "gpm/measure_spec.hpp"
#include "gpm/metrics.hpp"
#include "gpm/rng.hpp"
#include "gpm/sampling.hpp"
#include "gpm/special.hpp"

namespace gpm {

namespace {

using json = nlohmann::json;

// Reads parameters with defaults and records every resolved value for replay.
class Params {
 public:
  explicit Params(const json& in) : in_(in.is_null() ? json::object() : in) {
    if (!in_.is_object()) throw ConfigError("params must be a JSON object");
  }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    T v = fallback;
    if (in_.contains(key)) {
      try {
        v = in_.at(key).get<T>();
      } catch (const json::exception&) {
        throw ConfigError("parameter '" + key + "' has the wrong type");
      }
    }
    out_[key] = v;
    return v;
  }

  template <class T>
  T require(const std::string& key) {
    if (!in_.contains(key)) throw ConfigError("missing parameter '" + key + "'");
    return get<T>(key, T{});
  }

  bool has(const std::string& key) const { return in_.contains(key); }
  const json& resolved() const { return out_; }

 private:
  json in_;
  json out_ = json::object();
};

Discretization discretization(Params& p) {
  Discretization d;
  d.cells_1d = p.get<std::size_t>("cells_1d", d.cells_1d);
  d.cells_2d = p.get<std::size_t>("cells_2d", d.cells_2d);
  d.tail_mass = p.get<double>("tail_mass", d.tail_mass);
  d.lp_atoms = p.get<std::size_t>("lp_atoms", d.lp_atoms);
  return d;
}

Discretization refined(Discretization d) {
  d.cells_1d *= 2;
  d.cells_2d *= 2;
  d.lp_atoms *= 2;
  return d;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::string status_for(double ratio) {
  if (ratio <= 1.0) return "pass";
  if (ratio <= 1.0 + kPassTolerance) return "pass-marginal";
  return "fail";
}

// Evaluates an assertive inequality; a marginal ratio triggers one rerun on a refined grid.
void assert_with_refinement(InequalityReport& r, const Discretization& disc,
                            const std::function<std::pair<double, double>(const Discretization&)>& sides) {
  r.assertive = true;
  auto [lhs, rhs] = sides(disc);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  r.status = status_for(r.ratio);
  if (r.status == "pass-marginal") {
    auto [l2, r2] = sides(refined(disc));
    double ratio2 = safe_ratio(l2, r2);
    r.details["refinement"] = {{"lhs", l2}, {"rhs", r2}, {"ratio", ratio2}, {"coarse_ratio", r.ratio}};
    r.lhs = l2;
    r.rhs = r2;
    r.ratio = ratio2;
    r.status = ratio2 <= 1.0 + kPassTolerance ? "pass-marginal" : "fail";
  }
}

void report_only(InequalityReport& r, double lhs, double rhs) {
  r.assertive = false;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  r.status = "report-only";
}

Measure measure_param(Params& p, const std::string& key, std::uint64_t seed, InequalityReport& r) {
  auto spec = p.require<std::string>(key);
  SpecContext ctx;
  ctx.n_samples = p.get<std::size_t>("n_samples", 200000);
  ctx.seed = seed;
  Measure m = parse_measure(spec, ctx);
  r.provenance.push_back(m.provenance());
  return m;
}

// Shift profiles of signed differences are reused across α values within a process.
std::vector<ShiftProfile> cached_profiles(const SignedMeasure& m, const Discretization& disc, const std::string& key) {
  static std::mutex mutex;
  static std::map<std::string, std::vector<ShiftProfile>> cache;
  std::string full = key + "|" + disc.to_json().dump();
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(full); it != cache.end()) return it->second;
  }
  auto profiles = direction_profiles(m, default_shift_grid(), disc);
  std::lock_guard lock(mutex);
  cache[full] = profiles;
  return profiles;
}

bool is_sampled(const Measure& m) { return m.kind() == "empirical"; }

std::string pair_key(const Measure& a, const Measure& b, std::uint64_t seed, std::size_t n) {
  std::string k = a.provenance() + "|" + b.provenance();
  if (is_sampled(a) || is_sampled(b)) k += "|seed=" + std::to_string(seed) + "|n=" + std::to_string(n);
  return k;
}

// ------------------------------------------------------------ HLL family

struct HllTerms {
  double tv = 0.0, seminorm = 0.0, kantorovich = 0.0, fm = 0.0, constant = 0.0;
};

InequalityReport check_frac_hll(const json& params, std::uint64_t seed, bool fortet_mourier) {
  InequalityReport r;
  r.check = fortet_mourier ? "frac-hll-fm" : "frac-hll";
  r.theorem = fortet_mourier ? "fractional-hll-fortet-mourier" : "fractional-hll";
  r.seed = seed;
  Params p(params);
  Measure mu = measure_param(p, "a", seed, r);
  Measure nu = measure_param(p, "b", seed, r);
  double alpha = p.get<double>("alpha", 1.0);
  std::size_t n = p.get<std::size_t>("n_samples", 200000);
  Discretization disc = discretization(p);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  auto k = static_cast<unsigned>(mu.dim());
  HllTerms last;
  assert_with_refinement(r, disc, [&](const Discretization& d) {
    HllTerms t;
    t.tv = tv_distance(mu, nu, d).value;
    t.constant = hll_constant(k, alpha);
    if (t.tv == 0.0) {
      last = t;
      return std::pair{0.0, 0.0};
    }
    auto profiles = cached_profiles(difference(mu, nu), d, pair_key(mu, nu, seed, n));
    t.seminorm = besov_seminorm(profiles, alpha).value;
    double a1 = 1.0 / (1.0 + alpha), a2 = alpha / (1.0 + alpha);
    double rhs;
    if (fortet_mourier) {
      t.fm = fm_distance(mu, nu, d).value;
      rhs = (t.constant * std::pow(t.seminorm, a1) + std::pow(2.0, a1)) * std::pow(t.fm, a2);
    } else {
      t.kantorovich = kantorovich(mu, nu, d).value;
      rhs = t.constant * std::pow(t.seminorm, a1) * std::pow(t.kantorovich, a2);
    }
    last = t;
    return std::pair{t.tv, rhs};
  });
  r.details["tv"] = last.tv;
  r.details["seminorm_lower_bound"] = last.seminorm;
  r.details["constant"] = last.constant;
  if (fortet_mourier) r.details["fm"] = last.fm;
  else r.details["kantorovich"] = last.kantorovich;
  r.details["discretization"] = disc.to_json();
  r.params = p.resolved();
  return r;
}

InequalityReport check_mhll(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "mhll";
  r.theorem = "classical-hll";
  r.seed = seed;
  Params p(params);
  Measure mu = measure_param(p, "a", seed, r);
  Measure nu = measure_param(p, "b", seed, r);
  Discretization disc = discretization(p);
  if (mu.dim() != 1) throw ConfigError("mhll needs one-dimensional measures");
  double c = hll_constant(1, 1.0);
  json terms;
  assert_with_refinement(r, disc, [&](const Discretization& d) {
    double tv = tv_distance(mu, nu, d).value;
    double dk = kantorovich(mu, nu, d).value;
    double bv = bv_norm(render(difference(mu, nu), d).grid);
    terms = {{"tv", tv}, {"kantorovich", dk}, {"bv_norm", bv}, {"constant", c}};
    return std::pair{tv * tv, c * c * dk * bv};
  });
  r.details = terms;
  r.params = p.resolved();
  return r;
}

double box_mass(const Measure& m, const std::vector<double>& box, const Discretization& disc) {
  std::size_t k = m.dim();
  if (box.size() != 2 * k) throw ConfigError("each set needs 2k coordinates");
  for (std::size_t j = 0; j < k; ++j)
    if (!(box[2 * j + 1] >= box[2 * j])) throw ConfigError("set bounds must be ordered");
  if (auto law = m.exact_1d()) return cdf(*law, box[1]) - cdf(*law, box[0]);
  if (const auto* g = std::get_if<GaussianLaw>(&m.representation())) {
    double mass = 1.0;
    for (std::size_t j = 0; j < k; ++j)
      mass *= normal_cdf((box[2 * j + 1] - g->mean[j]) / g->sd) - normal_cdf((box[2 * j] - g->mean[j]) / g->sd);
    return mass;
  }
  GridFunction f = render(SignedMeasure{{1.0, m}}, disc).grid;
  auto overlap = [&](const GridAxis& a, std::size_t i, double lo, double hi) {
    return std::max(0.0, std::min(hi, a.edge(i + 1)) - std::max(lo, a.edge(i)));
  };
  double mass = 0.0;
  if (k == 1) {
    for (std::size_t i = 0; i < f.axes[0].n; ++i) mass += f.values[i] * overlap(f.axes[0], i, box[0], box[1]);
  } else {
    for (std::size_t i = 0; i < f.axes[0].n; ++i) {
      double ox = overlap(f.axes[0], i, box[0], box[1]);
      if (ox == 0.0) continue;
      for (std::size_t j = 0; j < f.axes[1].n; ++j) mass += f.at(i, j) * ox * overlap(f.axes[1], j, box[2], box[3]);
    }
  }
  return mass;
}

InequalityReport check_set_bound(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "set-bound";
  r.theorem = "besov-set-bound";
  r.seed = seed;
  Params p(params);
  Measure nu = measure_param(p, "a", seed, r);
  double alpha = p.get<double>("alpha", 1.0);
  auto sets = p.get<std::vector<std::vector<double>>>("sets", {});
  std::size_t n = p.get<std::size_t>("n_samples", 200000);
  Discretization disc = discretization(p);
  double k = static_cast<double>(nu.dim());
  double c1 = hll_set_constant(static_cast<unsigned>(nu.dim()), alpha);
  json rows = json::array();
  assert_with_refinement(r, disc, [&](const Discretization& d) {
    rows = json::array();
    double sn = besov_seminorm(cached_profiles(SignedMeasure{{1.0, nu}}, d, pair_key(nu, nu, seed, n) + "|single"),
                               alpha)
                    .value;
    double worst_l = 0.0, worst_r = 0.0, worst = -1.0;
    for (const auto& box : sets) {
      double lambda = 1.0;
      for (std::size_t j = 0; j < nu.dim(); ++j) lambda *= box.at(2 * j + 1) - box.at(2 * j);
      double lhs = box_mass(nu, box, d);
      double rhs = c1 * std::pow(sn, k / (alpha + k)) * std::pow(lambda, alpha / (alpha + k));
      double ratio = safe_ratio(lhs, rhs);
      rows.push_back({{"set", box}, {"measure", lhs}, {"lebesgue", lambda}, {"bound", rhs}, {"ratio", ratio}});
      if (ratio > worst) {
        worst = ratio;
        worst_l = lhs;
        worst_r = rhs;
      }
    }
    r.details["seminorm_lower_bound"] = sn;
    return std::pair{worst_l, worst_r};
  });
  r.details["constant"] = c1;
  r.details["sets"] = rows;
  r.params = p.resolved();
  return r;
}

// ------------------------------------------------------- polynomial laws

// Measure spec of the law of f, in the mini-language accepted by parse_measure.
std::string map_spec(const PolynomialMap& f) {
  std::string out;
  for (const auto& c : f.components()) out += (out.empty() ? "" : "; ") + to_string(c);
  return "poly(" + out + ")";
}

std::size_t map_degree(const PolynomialMap& f) { return f.degree(); }

bool single_variable(const PolynomialMap& f) { return f.k() == 1 && f[0].variables_used().size() == 1; }

PolynomialMap interpolate(const PolynomialMap& f, const PolynomialMap& g, double delta) {
  if (f.k() != g.k()) throw ConfigError("f and g must have the same number of components");
  Rational d = rational_from_double(delta);
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < f.k(); ++i) out.push_back(f[i] + (g[i] - f[i]) * d);
  return PolynomialMap(out);
}


InequalityReport check_poly_besov(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "poly-besov";
  r.theorem = "polynomial-image-besov";
  r.seed = seed;
  Params p(params);
  PolynomialMap f = parse_map(p.require<std::string>("poly"));
  r.provenance.push_back(map_spec(f));
  std::size_t k = f.k();
  double d = static_cast<double>(map_degree(f));
  bool exact = single_variable(f);
  double alpha_default = k == 1 ? (d > 0 ? 1.0 / d : 1.0) : (d > 1 ? 1.0 / (4.0 * k * (d - 1.0)) : 1.0);
  double alpha = p.get<double>("alpha", alpha_default);
  double decades = p.get<double>("decades", exact ? 2.0 : 1.0);
  double a = p.get<double>("a", 1e-9);
  std::size_t n = p.get<std::size_t>("n_samples", 200000);
  Discretization disc = discretization(p);
  r.params = p.resolved();

  auto summary = summarize(f, n, seed);
  r.details["hypotheses"] = summary.to_json();
  bool degenerate = k == 1 ? f[0].is_constant() : !(summary.expected_det.value > a);
  if (degenerate || k > 2) {
    r.status = "hypothesis-violation";
    r.details["reason"] = k > 2 ? "shift profiles support k <= 2" : "expected Malliavin determinant below a";
    r.lhs = summary.expected_det.value;
    r.rhs = a;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    return r;
  }

  SpecContext ctx{n, seed, "."};
  Measure law = exact ? Measure(PolynomialLaw(f[0]), r.provenance[0].get<std::string>())
                      : parse_measure(map_spec(f), ctx);
  auto profile_set = [&](const Discretization& dd) {
    std::vector<double> h = exact ? log_grid(1e-4, 1.0, 40) : default_shift_grid();
    return direction_profiles(SignedMeasure{{1.0, law}}, h, dd);
  };
  auto profiles = profile_set(disc);
  double alpha_hat = std::numeric_limits<double>::infinity();
  json fits = json::array();
  for (const auto& prof : profiles) {
    FitWindow w;
    w.decades = decades;
    auto fit = besov_order_fit(prof, w);
    fits.push_back({{"direction", prof.direction}, {"fit", fit.to_json()}});
    alpha_hat = std::min(alpha_hat, fit.alpha_hat);
  }
  double sn = besov_seminorm(profiles, alpha).value;
  double sn_refined = exact ? sn : besov_seminorm(profile_set(refined(disc)), alpha).value;
  bool stable = std::abs(sn_refined - sn) <= 0.02 * std::max(sn, 1e-300);
  r.details["fits"] = fits;
  r.details["alpha_hat"] = alpha_hat;
  r.details["alpha"] = alpha;
  r.details["seminorm_lower_bound"] = sn;
  r.details["seminorm_refined"] = sn_refined;
  r.details["stable"] = stable;
  r.details["representation"] = profiles.front().representation;
  double lhs = alpha - 0.05, rhs = alpha_hat;
  if (exact) {
    r.assertive = true;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = safe_ratio(lhs, rhs);
    r.status = r.ratio <= 1.0 ? "pass" : "fail";
  } else {
    report_only(r, lhs, rhs);
    r.details["consistent"] = alpha_hat >= lhs && stable;
  }
  return r;
}

struct FamilyPoint {
  double delta = 0.0, tv = 0.0, kantorovich = 0.0, l2 = 0.0;
};

struct FamilyOptions {
  std::size_t n_samples = 200000;
  std::size_t ot_points = 2000;
  Discretization disc;
  bool need_kantorovich = true;
};

// TV and d_K between the laws of f and f + δ(g − f) for each δ, exactly for polynomials in
// one variable and otherwise from common Gaussian samples.
std::vector<FamilyPoint> family_study(const PolynomialMap& f, const PolynomialMap& g, const std::vector<double>& deltas,
                                      const FamilyOptions& o, std::uint64_t seed, std::string& representation) {
  std::vector<FamilyPoint> out;
  Polynomial diff_sq(f.n_vars());
  Rational l2sq = 0;
  for (std::size_t i = 0; i < f.k(); ++i) l2sq += l2_norm_squared(g[i] - f[i]);
  double l2 = std::sqrt(to_double(l2sq));
  bool exact = single_variable(f) && single_variable(g);
  if (exact) {
    representation = "exact-1d";
    Measure mf{PolynomialLaw(f[0])};
    for (double delta : deltas) {
      auto gd = interpolate(f, g, delta);
      if (gd[0].is_constant()) throw ConfigError("perturbed polynomial is constant");
      Measure mg{PolynomialLaw(gd[0])};
      FamilyPoint pt{delta, tv_distance(mf, mg, o.disc).value, 0.0, delta * l2};
      if (o.need_kantorovich) pt.kantorovich = kantorovich(mf, mg, o.disc).value;
      out.push_back(pt);
    }
    return out;
  }
  representation = f.k() == 1 ? "kde-1d/sorted-w1" : "kde-2d/network-simplex";
  if (f.k() > 2) throw ConfigError("rate studies support k <= 2");
  std::size_t n_vars = std::max<std::size_t>({1, f.n_vars(), g.n_vars()});
  SampleSet base = sample_gaussian(n_vars, o.n_samples, seed);
  auto pad = [&](const PolynomialMap& m) {
    std::vector<Polynomial> c;
    for (const auto& p : m.components()) c.push_back(p.with_n_vars(n_vars));
    return PolynomialMap(c);
  };
  SampleSet sf = pushforward(pad(f), base);
  for (double delta : deltas) {
    SampleSet sg = pushforward(pad(interpolate(f, g, delta)), base);
    FamilyPoint pt{delta, tv_distance(Measure(sf), Measure(sg), o.disc).value, 0.0, delta * l2};
    if (o.need_kantorovich) {
      if (f.k() == 1) pt.kantorovich = kantorovich_1d(Measure(sf), Measure(sg), o.disc).value;
      else pt.kantorovich = kantorovich_kd(Measure(prefix(sf, o.ot_points)), Measure(prefix(sg, o.ot_points))).distance.value;
    }
    out.push_back(pt);
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) continue;
    mx += std::log(x[i]);
    my += std::log(y[i]);
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) continue;
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

std::vector<double> delta_grid(Params& p, double lo, double hi) {
  double a = p.get<double>("delta_lo", lo);
  double b = p.get<double>("delta_hi", hi);
  auto per = p.get<std::size_t>("per_decade", 4);
  return log_grid(a, b, per);
}

// Boundedness summary of r(δ) = lhs(δ) / rhs(δ)^θ.
void boundedness(InequalityReport& r, const std::vector<double>& ratios) {
  std::vector<double> finite;
  for (double v : ratios)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.empty()) {
    report_only(r, 0.0, 0.0);
    r.details["bounded"] = true;
    return;
  }
  double mx = *std::max_element(finite.begin(), finite.end());
  double med = median(finite);
  report_only(r, mx, kBoundednessFactor * med);
  r.details["max_ratio"] = mx;
  r.details["median_ratio"] = med;
  r.details["bounded"] = mx <= kBoundednessFactor * med;
}

InequalityReport check_tv_vs_kantorovich(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "tv-vs-kantorovich";
  r.theorem = "tv-kantorovich-rate";
  r.seed = seed;
  Params p(params);
  PolynomialMap f = parse_map(p.require<std::string>("f"));
  PolynomialMap g = parse_map(p.require<std::string>("g"));
  r.provenance = {map_spec(f), map_spec(g)};
  bool exact = single_variable(f) && single_variable(g);
  auto deltas = delta_grid(p, exact ? 1e-4 : 1e-3, exact ? 1e-2 : 1e-1);
  double tau = p.get<double>("tau", 0.1);
  double d = static_cast<double>(std::max(f.degree(), g.degree()));
  double kk = static_cast<double>(f.k());
  auto sf = summarize(f, 200000, seed), sg = summarize(g, 200000, seed);
  bool grad_ok = f.k() == 1 && sf.grad_star[0] > 0 && sg.grad_star[0] > 0;
  std::string variant = p.get<std::string>("variant", f.k() == 1 ? (grad_ok ? "grad-star" : "one-dim") : "general");
  double theta_default = variant == "grad-star" ? 1.0 / (d + 1.0)
                         : variant == "one-dim" ? 1.0 / (2.0 * d - 1.0 + tau)
                                                : 1.0 / (4.0 * kk * (d - 1.0) + 1.0 + tau);
  if (variant != "grad-star" && variant != "one-dim" && variant != "general")
    throw ConfigError("variant must be grad-star, one-dim or general");
  double theta = p.get<double>("theta", theta_default);
  FamilyOptions o;
  o.n_samples = p.get<std::size_t>("n_samples", 200000);
  o.ot_points = p.get<std::size_t>("ot_points", 2000);
  o.disc = discretization(p);
  r.params = p.resolved();
  r.details["hypotheses"] = {{"f", sf.to_json()}, {"g", sg.to_json()}};
  r.details["theta"] = theta;
  r.details["variant"] = variant;
  std::string rep;
  auto pts = family_study(f, g, deltas, o, seed, rep);
  json rows = json::array();
  std::vector<double> ratios;
  for (const auto& pt : pts) {
    double ratio = pt.kantorovich > 0 ? pt.tv / std::pow(pt.kantorovich, theta) : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({{"delta", pt.delta}, {"tv", pt.tv}, {"kantorovich", pt.kantorovich}, {"ratio", ratio}});
    ratios.push_back(ratio);
  }
  r.details["representation"] = rep;
  r.details["rows"] = rows;
  boundedness(r, ratios);
  return r;
}

// f = x_i^d and g − f a nonzero constant.
bool monomial_family(const PolynomialMap& f, const PolynomialMap& g) {
  if (f.k() != 1 || g.k() != 1) return false;
  const auto& terms = f[0].terms();
  if (terms.size() != 1 || terms[0].coefficient != 1 || terms[0].exponents.entries().size() != 1) return false;
  Polynomial diff = g[0] - f[0];
  return diff.is_constant() && !diff.is_zero();
}

InequalityReport check_tv_vs_l2(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "tv-vs-l2";
  r.theorem = "tv-l2-rate";
  r.seed = seed;
  Params p(params);
  PolynomialMap f = parse_map(p.require<std::string>("f"));
  PolynomialMap g = parse_map(p.require<std::string>("g"));
  r.provenance = {map_spec(f), map_spec(g)};
  bool exact = single_variable(f) && single_variable(g);
  auto deltas = delta_grid(p, exact ? 1e-4 : 1e-3, exact ? 1e-2 : 1e-1);
  double tau = p.get<double>("tau", 0.1);
  double d = static_cast<double>(std::max(f.degree(), g.degree()));
  double kk = static_cast<double>(f.k());
  double theta = p.get<double>("theta", 1.0 / (4.0 * kk * (d - 1.0) + tau));
  FamilyOptions o;
  o.n_samples = p.get<std::size_t>("n_samples", 200000);
  o.disc = discretization(p);
  o.need_kantorovich = false;
  r.params = p.resolved();
  r.details["hypotheses"] = {{"f", summarize(f, 200000, seed).to_json()}};
  r.details["theta"] = theta;
  std::string rep;
  auto pts = family_study(f, g, deltas, o, seed, rep);
  json rows = json::array();
  std::vector<double> ratios, xs, ys;
  for (const auto& pt : pts) {
    double ratio = pt.l2 > 0 ? pt.tv / std::pow(pt.l2, theta) : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({{"delta", pt.delta}, {"tv", pt.tv}, {"l2", pt.l2}, {"ratio", ratio}});
    ratios.push_back(ratio);
    xs.push_back(pt.l2);
    ys.push_back(pt.tv);
  }
  r.details["representation"] = rep;
  r.details["rows"] = rows;
  double slope = loglog_slope(xs, ys);
  r.details["slope"] = slope;
  boundedness(r, ratios);
  if (monomial_family(f, g)) {
    // Exactly solvable family: the exponent itself is asserted.
    double target = 1.0 / d;
    r.details["expected_slope"] = target;
    r.assertive = true;
    r.lhs = std::abs(slope - target);
    r.rhs = 0.02;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    r.status = r.ratio <= 1.0 ? "pass" : "fail";
  }
  return r;
}

InequalityReport check_k_vs_fm(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "k-vs-fm";
  r.theorem = "kantorovich-fortet-mourier";
  r.seed = seed;
  Params p(params);
  Measure mu = measure_param(p, "a", seed, r);
  Measure nu = measure_param(p, "b", seed, r);
  double d = p.get<double>("degree", 1.0);
  Discretization disc = discretization(p);
  r.params = p.resolved();
  double dk = kantorovich(mu, nu, disc).value;
  double fm = fm_distance(mu, nu, disc).value;
  r.details["kantorovich"] = dk;
  r.details["fm"] = fm;
  if (fm == 0.0) {
    report_only(r, dk, 0.0);
    r.ratio = 0.0;
    r.details["skipped"] = "distances vanish";
    return r;
  }
  double with_log = fm * (std::pow(std::abs(std::log(fm)), d / 2.0) + 1.0);
  report_only(r, dk, with_log);
  r.details["ratio_with_log"] = dk / with_log;
  r.details["ratio_without_log"] = dk / fm;
  return r;
}

InequalityReport check_cw_set_corollary(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "cw-set-corollary";
  r.theorem = "small-set-probability";
  r.seed = seed;
  Params p(params);
  PolynomialMap f = parse_map(p.require<std::string>("f"));
  r.provenance.push_back(map_spec(f));
  std::size_t k = f.k();
  double d = static_cast<double>(f.degree());
  double tau = p.get<double>("tau", 0.1);
  double theta = p.get<double>("theta", 1.0 / (4.0 * k * k * (d - 1.0) + tau));
  std::size_t n = p.get<std::size_t>("n_samples", 1000000);
  std::vector<double> x0(f.n_vars());
  for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = i % 2 == 0 ? 0.7 : -0.4;
  x0 = p.get<std::vector<double>>("point", x0);
  std::vector<double> center;
  for (const auto& c : f.components()) center.push_back(evaluate(c.with_n_vars(f.n_vars()), x0));
  center = p.get<std::vector<double>>("center", center);
  if (center.size() != k) throw ConfigError("center must have k coordinates");
  auto eps = log_grid(p.get<double>("eps_lo", 0.01), p.get<double>("eps_hi", 1.0), p.get<std::size_t>("per_decade", 4));
  double a = p.get<double>("a", 1e-9);
  r.params = p.resolved();
  auto summary = summarize(f, 200000, seed);
  r.details["hypotheses"] = summary.to_json();
  r.details["theta"] = theta;
  if (!(summary.expected_det.value > a)) {
    r.status = "hypothesis-violation";
    r.lhs = summary.expected_det.value;
    r.rhs = a;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    return r;
  }
  SampleSet base = sample_gaussian(std::max<std::size_t>(1, f.n_vars()), n, seed);
  SampleSet img = pushforward(f, base);
  std::vector<double> dist(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < k; ++j) m = std::max(m, std::abs(img.point(i)[j] - center[j]));
    dist[i] = m;
  }
  std::sort(dist.begin(), dist.end());
  json rows = json::array();
  double worst = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (double e : eps) {
    double prob = static_cast<double>(std::upper_bound(dist.begin(), dist.end(), 0.5 * e) - dist.begin()) /
                  static_cast<double>(n);
    double lambda = std::pow(e, static_cast<double>(k));
    double ratio = prob / std::pow(lambda, theta);
    double log_ratio = prob > 0.0 && lambda < 1.0 ? std::log(prob) / std::log(lambda)
                                                   : std::numeric_limits<double>::infinity();
    rows.push_back({{"eps", e}, {"probability", prob}, {"lebesgue", lambda}, {"ratio", ratio},
                    {"log_ratio", std::isfinite(log_ratio) ? json(log_ratio) : json(nullptr)}});
    max_ratio = std::max(max_ratio, ratio);
    if (e <= 10.0 * eps.front() * (1 + 1e-12)) worst = std::min(worst, log_ratio);
  }
  r.details["center"] = center;
  r.details["rows"] = rows;
  r.details["smallest_decade_log_ratio"] = std::isfinite(worst) ? json(worst) : json(nullptr);
  r.details["consistent"] = worst >= theta - 0.05;
  report_only(r, max_ratio, 1.0);
  return r;
}

// ------------------------------------------------------------ algebraic checks

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t& index) { return uniform01(seed, stream, index++); }

InequalityReport check_det_perturbation(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "det-perturbation";
  r.theorem = "determinant-perturbation";
  r.seed = seed;
  Params p(params);
  auto trials = p.get<std::size_t>("trials", 10000);
  auto k_max = p.get<std::size_t>("k_max", 6);
  double range = p.get<double>("range", 10.0);
  r.params = p.resolved();
  r.assertive = true;
  std::uint64_t idx = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t failures = 0;
  DetPerturbation worst_case;
  for (std::size_t t = 0; t < trials; ++t) {
    auto k = static_cast<Eigen::Index>(1 + t % k_max);
    Eigen::MatrixXd a(k, k), b(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        a(i, j) = range * (2.0 * uniform(seed, 0, idx) - 1.0);
        b(i, j) = range * (2.0 * uniform(seed, 0, idx) - 1.0);
      }
    auto res = det_perturbation_bound(a, b);
    if (!res.holds) ++failures;
    double slack = (res.lhs - res.rhs) / res.scale;
    if (slack > worst) {
      worst = slack;
      worst_case = res;
    }
  }
  r.lhs = worst_case.lhs;
  r.rhs = worst_case.rhs;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.status = failures == 0 ? "pass" : "fail";
  r.details = {{"trials", trials}, {"failures", failures}, {"worst_relative_slack", worst}};
  return r;
}

Polynomial random_polynomial(std::uint64_t seed, std::uint64_t& idx, unsigned d_max, std::size_t n_max) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(uniform(seed, 1, idx) * static_cast<double>(n)); };
  std::size_t n = 1 + pick(n_max);
  std::size_t terms = 1 + pick(6);
  std::vector<Monomial> mons;
  for (std::size_t t = 0; t < terms; ++t) {
    unsigned deg = static_cast<unsigned>(pick(d_max + 1));
    std::vector<std::pair<VarIndex, Exponent>> ex;
    for (unsigned e = 0; e < deg; ++e) ex.emplace_back(static_cast<VarIndex>(1 + pick(n)), 1);
    long num = static_cast<long>(pick(19)) - 9;
    if (num == 0) num = 1;
    long den = 1 + static_cast<long>(pick(5));
    mons.push_back({Exponents::from_pairs(ex), Rational(num, den)});
  }
  return Polynomial::from_terms(mons, n);
}

InequalityReport check_reverse_poincare(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "reverse-poincare";
  r.theorem = "reverse-poincare";
  r.seed = seed;
  Params p(params);
  auto trials = p.get<std::size_t>("trials", 100);
  auto d_max = p.get<unsigned>("d_max", 5);
  auto n_max = p.get<std::size_t>("n_max", 6);
  r.params = p.resolved();
  r.assertive = true;
  std::uint64_t idx = 0;
  std::size_t failures = 0, equality_failures = 0;
  double worst = 0.0;
  ReversePoincare worst_case;
  worst_case.lhs = 0;
  worst_case.rhs = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto res = reverse_poincare_check(random_polynomial(seed, idx, d_max, n_max));
    if (!res.holds) ++failures;
    double ratio = safe_ratio(to_double(res.lhs), to_double(res.rhs));
    if (ratio > worst) {
      worst = ratio;
      worst_case = res;
    }
  }
  // Pure top-chaos inputs (Hermite products of total order d) attain equality.
  json top = json::array();
  for (unsigned d = 1; d <= d_max; ++d) {
    std::vector<std::pair<VarIndex, Exponent>> orders;
    for (unsigned e = 0; e < d; ++e) orders.emplace_back(static_cast<VarIndex>(1 + e % 3), 1);
    Polynomial h = hermite_product(Exponents::from_pairs(orders));
    auto res = reverse_poincare_check(h);
    if (!res.equality) ++equality_failures;
    top.push_back({{"poly", to_string(h)}, {"check", res.to_json()}});
  }
  r.lhs = to_double(worst_case.lhs);
  r.rhs = to_double(worst_case.rhs);
  r.ratio = worst;
  r.status = failures == 0 && equality_failures == 0 ? "pass" : "fail";
  r.details = {{"trials", trials}, {"failures", failures}, {"equality_failures", equality_failures}, {"top_chaos", top}};
  return r;
}

InequalityReport check_carbery_wright(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "carbery-wright";
  r.theorem = "carbery-wright";
  r.seed = seed;
  Params p(params);
  Polynomial poly = parse_polynomial(p.require<std::string>("poly"));
  r.provenance.push_back("poly(" + to_string(poly) + ")");
  auto t = log_grid(p.get<double>("t_lo", 1e-8), p.get<double>("t_hi", 10.0), p.get<std::size_t>("per_decade", 4));
  auto n = p.get<std::size_t>("n_samples", 1000000);
  auto mode = p.get<std::string>("mode", "auto");
  if (mode != "auto" && mode != "mc") throw ConfigError("mode must be auto or mc");
  r.params = p.resolved();
  auto prof = carbery_wright_profile(poly, t, n, seed, mode == "mc");
  r.details = prof.to_json();
  report_only(r, prof.sup_ratio, 1.0);
  return r;
}

InequalityReport check_gaussian_tail(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "gaussian-tail";
  r.theorem = "polynomial-gaussian-tail";
  r.seed = seed;
  Params p(params);
  Polynomial poly = parse_polynomial(p.require<std::string>("poly"));
  r.provenance.push_back("poly(" + to_string(poly) + ")");
  double d = static_cast<double>(poly.degree());
  double rr = p.get<double>("r", 0.5 * d / (2.0 * std::numbers::e));
  std::vector<double> t;
  for (int i = 0; i <= 10; ++i) t.push_back(0.5 * i);
  t = p.get<std::vector<double>>("t", t);
  auto n = p.get<std::size_t>("n_samples", 1000000);
  r.params = p.resolved();
  auto prof = gaussian_tail_check(poly, rr, t, n, seed);
  r.details = prof.to_json();
  report_only(r, prof.c_hat, 1.0);
  return r;
}

InequalityReport check_monomial_optimality(const json& params, std::uint64_t seed) {
  InequalityReport r;
  r.check = "monomial-optimality";
  r.theorem = "monomial-optimality";
  r.seed = seed;
  Params p(params);
  auto d = p.get<unsigned>("d", 2);
  if (d < 1) throw ConfigError("d must be at least 1");
  auto h = log_grid(p.get<double>("h_lo", 1e-4), p.get<double>("h_hi", 1e-1), p.get<std::size_t>("per_decade", 10));
  double fit_hi = p.get<double>("fit_hi", 1e-2);
  Discretization disc = discretization(p);
  r.params = p.resolved();
  r.provenance = {"monpow(" + std::to_string(d) + ",0)"};
  Measure base = Measure::monomial_power(d, 0.0);
  double k_err = 0.0, tv_err = 0.0;
  std::vector<double> xs, ys;
  json rows = json::array();
  for (double hi : h) {
    Measure shifted_law = Measure::monomial_power(d, hi);
    double dk = kantorovich(base, shifted_law, disc).value;
    double tv = tv_distance(base, shifted_law, disc).value;
    k_err = std::max(k_err, std::abs(dk - hi));
    json row{{"h", hi}, {"kantorovich", dk}, {"tv", tv}};
    // 2γ(|x| ≤ h^{1/d}) needs the law supported on a half line, i.e. even d.
    if (d % 2 == 0) {
      double closed = 2.0 * normal_central_mass(std::pow(hi, 1.0 / d));
      tv_err = std::max(tv_err, std::abs(tv - closed));
      row["tv_closed_form"] = closed;
    }
    rows.push_back(row);
    if (hi <= fit_hi * (1 + 1e-12)) {
      xs.push_back(hi);
      ys.push_back(tv);
    }
  }
  double slope = loglog_slope(xs, ys);
  r.assertive = true;
  r.lhs = std::abs(slope - 1.0 / d);
  r.rhs = 0.02;
  r.ratio = r.lhs / r.rhs;
  bool ok = r.ratio <= 1.0 && k_err <= 1e-8 && tv_err <= 1e-6;
  r.status = ok ? "pass" : "fail";
  r.details = {{"slope", slope},  {"expected_slope", 1.0 / d}, {"max_kantorovich_error", k_err},
               {"max_tv_error", d % 2 == 0 ? json(tv_err) : json(nullptr)}, {"rows", rows}};
  return r;
}

using CheckFn = std::function<InequalityReport(const json&, std::uint64_t)>;

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks{
      {"frac-hll", [](const json& p, std::uint64_t s) { return check_frac_hll(p, s, false); }},
      {"frac-hll-fm", [](const json& p, std::uint64_t s) { return check_frac_hll(p, s, true); }},
      {"mhll", check_mhll},
      {"set-bound", check_set_bound},
      {"poly-besov", check_poly_besov},
      {"tv-vs-kantorovich", check_tv_vs_kantorovich},
      {"tv-vs-l2", check_tv_vs_l2},
      {"k-vs-fm", check_k_vs_fm},
      {"cw-set-corollary", check_cw_set_corollary},
      {"det-perturbation", check_det_perturbation},
      {"reverse-poincare", check_reverse_poincare},
      {"carbery-wright", check_carbery_wright},
      {"gaussian-tail", check_gaussian_tail},
      {"monomial-optimality", check_monomial_optimality},
  };
  return checks;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

json InequalityReport::to_json(bool timestamp) const {
  json j{{"schema", "gpm/1"},
         {"check", check},
         {"theorem", theorem},
         {"params", params},
         {"seed", seed},
         {"lhs", number_or_null(lhs)},
         {"rhs", number_or_null(rhs)},
         {"ratio", number_or_null(ratio)},
         {"status", status},
         {"assertive", assertive},
         {"provenance", provenance},
         {"details", details},
         {"generator", kGeneratorId}};
  if (timestamp) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["timestamp"] = s.str();
  }
  return j;
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

InequalityReport run_check(const std::string& check, const json& params, std::uint64_t seed) {
  auto it = registry().find(check);
  if (it == registry().end()) throw ConfigError("unknown check '" + check + "'");
  return it->second(params, seed);
}

InequalityReport replay(const json& report) {
  try {
    return run_check(report.at("check").get<std::string>(), report.at("params"), report.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report is missing replay metadata: ") + e.what());
  }
}

SuiteConfig parse_suite(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("suite") || !j.at("suite").is_array()) throw ConfigError("config needs a 'suite' array");
  SuiteConfig c;
  for (const auto& item : j.at("suite")) {
    if (!item.is_object() || !item.contains("check") || !item.at("check").is_string())
      throw ConfigError("each suite item needs a 'check' string");
    SuiteItem s;
    s.check = item.at("check").get<std::string>();
    if (!registry().count(s.check)) throw ConfigError("unknown check '" + s.check + "'");
    if (item.contains("params")) {
      if (!item.at("params").is_object()) throw ConfigError("'params' must be an object");
      s.params = item.at("params");
    }
    if (item.contains("seed")) {
      if (!item.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
      s.seed = item.at("seed").get<std::uint64_t>();
    }
    c.items.push_back(std::move(s));
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("'output_dir' must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  return c;
}

SuiteConfig paper_default_suite(std::uint64_t seed) {
  SuiteConfig c;
  auto add = [&](const std::string& check, json params) {
    c.items.push_back({check, std::move(params), seed + c.items.size()});
  };
  for (int d : {2, 3, 4}) add("monomial-optimality", {{"d", d}});
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"gauss(0,1)", "gauss(0.1,1)"},         {"gauss(0,1)", "gauss(0.5,1)"},
      {"gauss(0,1)", "gauss(1,1)"},           {"gauss(0,1)", "gauss(0,1.5)"},
      {"gauss2(0,0,1)", "gauss2(0.3,0,1)"},   {"gauss2(0,0,1)", "gauss2(0,0,1.3)"},
      {"chisq1()", "monpow(2,-0.05)"},        {"monpow(3,0)", "monpow(3,0.05)"},
  };
  for (const auto& [a, b] : pairs)
    for (double alpha : {0.25, 0.5, 0.75, 1.0}) add("frac-hll", {{"a", a}, {"b", b}, {"alpha", alpha}});
  add("frac-hll-fm", {{"a", "gauss(0,1)"}, {"b", "gauss(0.1,1)"}, {"alpha", 1.0}});
  add("frac-hll-fm", {{"a", "monpow(2,0)"}, {"b", "monpow(2,0.05)"}, {"alpha", 0.45}});
  add("mhll", {{"a", "gauss(0,1)"}, {"b", "gauss(0.1,1)"}});
  add("mhll", {{"a", "gauss(0,1)"}, {"b", "gauss(0,1.5)"}});
  add("mhll", {{"a", "gauss(0,1)"}, {"b", "gauss(1,2)"}});
  add("set-bound", {{"a", "chisq1()"}, {"alpha", 0.45}, {"sets", json::array({{0.0, 0.01}})}});
  add("set-bound", {{"a", "gauss(0,1)"}, {"alpha", 1.0}, {"sets", json::array({{-0.5, 0.5}})}});
  for (const char* p : {"x1", "x1^2", "x1^3", "x1^4", "x1+x2; x1*x2", "x1; x1"}) add("poly-besov", {{"poly", p}});
  add("tv-vs-kantorovich", {{"f", "x1^2"}, {"g", "x1^2 - 1"}});
  add("tv-vs-kantorovich", {{"f", "x1+x2; x1*x2"}, {"g", "x1+x2+x1^2; x1*x2+x2^2"}});
  for (const char* p : {"x1^2", "x1^3", "x1^4"})
    add("tv-vs-l2", {{"f", p}, {"g", std::string(p) + " - 1"}});
  add("tv-vs-l2", {{"f", "x1+x2; x1*x2"}, {"g", "x1+x2+x1^2; x1*x2+x2^2"}});
  add("k-vs-fm", {{"a", "gauss(0,1)"}, {"b", "gauss(0.5,1)"}, {"degree", 1.0}});
  add("k-vs-fm", {{"a", "poly(x1^2)"}, {"b", "poly(x1^2 - 0.1)"}, {"degree", 2.0}});
  add("cw-set-corollary", {{"f", "x1+x2; x1*x2"}});
  add("det-perturbation", json::object());
  add("reverse-poincare", json::object());
  add("carbery-wright", {{"poly", "x1^2"}});
  add("carbery-wright", {{"poly", "x1^2 - 1"}, {"mode", "mc"}});
  add("gaussian-tail", {{"poly", "x1"}, {"r", 0.15}});
  add("gaussian-tail", {{"poly", "x1^2"}, {"r", 0.3}});
  return c;
}

json SuiteResult::summary() const {
  json counts_json = json::object();
  for (const auto& [k, v] : counts) counts_json[k] = v;
  return {{"schema", "gpm/1"}, {"reports", reports.size()}, {"counts", counts_json},
          {"assertive_failure", any_assertive_failure}};
}

void write_aggregate_csv(std::ostream& out, const std::vector<InequalityReport>& reports) {
  out << "theorem,lhs,rhs,ratio,pass,status\n";
  for (const auto& r : reports)
    out << r.theorem << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ',' << format_number(r.ratio)
        << ',' << (r.failed() ? "false" : "true") << ',' << r.status << '\n';
}

SuiteResult run_suite(const SuiteConfig& config, const RunOptions& options) {
  SuiteResult result;
  if (config.output_dir) std::filesystem::create_directories(*config.output_dir);
  for (std::size_t i = 0; i < config.items.size(); ++i) {
    const auto& item = config.items[i];
    auto start = std::chrono::steady_clock::now();
    InequalityReport r = run_check(item.check, item.params, item.seed);
    if (options.progress) {
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      *options.progress << "[" << (i + 1) << "/" << config.items.size() << "] " << item.check << " " << r.status
                        << " ratio=" << format_number(r.ratio) << " (" << std::fixed << std::setprecision(1) << secs
                        << "s)" << std::defaultfloat << std::endl;
    }
    ++result.counts[r.status];
    if (r.assertive && r.failed()) result.any_assertive_failure = true;
    if (config.output_dir) {
      std::ostringstream name;
      name << std::setw(3) << std::setfill('0') << i << '_' << item.check << ".json";
      std::ofstream out(*config.output_dir / name.str());
      out << r.to_json(options.timestamp).dump(2) << '\n';
    }
    result.reports.push_back(std::move(r));
  }
  if (config.output_dir) {
    std::ofstream csv(*config.output_dir / "summary.csv");
    write_aggregate_csv(csv, result.reports);
    std::ofstream s(*config.output_dir / "summary.json");
    s << result.summary().dump(2) << '\n';
  }
  return result;
}

}  // namespace gpm

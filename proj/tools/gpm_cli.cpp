#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpm/besov.hpp"
#include "gpm/malliavin.hpp"
#include "gpm/measure_spec.hpp"
#include "gpm/metrics.hpp"
#include "gpm/sampling.hpp"
#include "gpm/verify.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::uint64_t seed = 42;
  std::size_t n_samples = 200000;
  std::string output;
  std::size_t cells_1d = gpm::Discretization{}.cells_1d;
  std::size_t cells_2d = gpm::Discretization{}.cells_2d;

  gpm::Discretization disc() const {
    gpm::Discretization d;
    d.cells_1d = cells_1d;
    d.cells_2d = cells_2d;
    return d;
  }
  gpm::SpecContext ctx() const { return {n_samples, seed, "."}; }
};

void add_common(CLI::App* app, Common& c, bool grid = true) {
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--n-samples", c.n_samples, "Samples for sampled laws")->capture_default_str();
  app->add_option("-o,--output", c.output, "Output file (default: stdout)");
  if (grid) {
    app->add_option("--cells-1d", c.cells_1d, "Grid cells in one dimension")->capture_default_str();
    app->add_option("--cells-2d", c.cells_2d, "Grid cells per axis in two dimensions")->capture_default_str();
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

json envelope(const std::string& command, const Common& c) {
  return {{"schema", "gpm/1"},
          {"command", command},
          {"seed", c.seed},
          {"n_samples", c.n_samples},
          {"discretization", c.disc().to_json()}};
}

// --- dist

struct DistArgs {
  Common common;
  std::string metric = "tv";
  std::string a, b;
};

int cmd_dist(const DistArgs& args) {
  auto ctx = args.common.ctx();
  gpm::Measure mu = gpm::parse_measure(args.a, ctx);
  gpm::Measure nu = gpm::parse_measure(args.b, ctx);
  auto disc = args.common.disc();
  gpm::DistanceResult r;
  if (args.metric == "tv") r = gpm::tv_distance(mu, nu, disc);
  else if (args.metric == "k") r = gpm::kantorovich(mu, nu, disc);
  else if (args.metric == "kr") r = gpm::kr_distance(mu, nu, disc);
  else r = gpm::fm_distance(mu, nu, disc);
  json out = envelope("dist", args.common);
  out["a"] = args.a;
  out["b"] = args.b;
  out["result"] = r.to_json();
  emit_json(args.common.output, out);
  return kExitOk;
}

// --- besov

struct BesovArgs {
  Common common;
  std::string measure, poly;
  double alpha = 1.0;
  bool fit = false;
  std::string csv;
  double decades = 0.0;
  std::size_t directions = 16;
};

int cmd_besov(const BesovArgs& args) {
  if (args.measure.empty() == args.poly.empty()) throw CLI::ValidationError("exactly one of --measure and --poly is required");
  std::string spec = args.measure.empty() ? "poly(" + args.poly + ")" : args.measure;
  gpm::Measure m = gpm::parse_measure(spec, args.common.ctx());
  bool exact = m.exact_1d().has_value();
  auto h = exact ? gpm::log_grid(1e-4, 1.0, 40) : gpm::default_shift_grid();
  auto profiles = gpm::direction_profiles(gpm::SignedMeasure{{1.0, m}}, h, args.common.disc(), args.directions);
  json out = envelope("besov", args.common);
  out["measure"] = spec;
  out["alpha"] = args.alpha;
  out["directions"] = args.directions;
  auto sn = gpm::besov_seminorm(profiles, args.alpha);
  out["seminorm_lower_bound"] = {{"value", sn.value}, {"h", sn.h}, {"direction", sn.direction}};
  out["representation"] = profiles.front().representation;
  if (args.fit) {
    gpm::FitWindow w;
    w.decades = args.decades > 0 ? args.decades : (exact ? 2.0 : 1.0);
    json fits = json::array();
    double alpha_hat = std::numeric_limits<double>::infinity();
    for (const auto& p : profiles) {
      auto f = gpm::besov_order_fit(p, w);
      fits.push_back({{"direction", p.direction}, {"fit", f.to_json()}});
      alpha_hat = std::min(alpha_hat, f.alpha_hat);
    }
    out["fit_decades"] = w.decades;
    out["fits"] = fits;
    out["alpha_hat"] = alpha_hat;
  }
  if (!args.csv.empty()) {
    // Profile along the first direction; one file per direction when k = 2.
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      std::string path = profiles.size() == 1 ? args.csv : args.csv + "." + std::to_string(i) + ".csv";
      std::ofstream f(path);
      if (!f) throw std::runtime_error("cannot write " + path);
      profiles[i].write_csv(f);
    }
    out["csv"] = args.csv;
  }
  emit_json(args.common.output, out);
  return kExitOk;
}

// --- verify

struct VerifyArgs {
  Common common;
  std::string suite;
  std::string config;
  std::string check;
  std::vector<std::string> params;
  std::string a, b, poly, f, g;
  std::optional<double> alpha;
  bool no_timestamp = false;
  std::string output_dir;
  bool quiet = false;
};

json param_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

int cmd_verify(const VerifyArgs& args) {
  int selected = !args.suite.empty() + !args.config.empty() + !args.check.empty();
  if (selected != 1) throw CLI::ValidationError("exactly one of --suite, --config and --check is required");
  gpm::RunOptions opts;
  opts.timestamp = !args.no_timestamp;
  if (!args.quiet) opts.progress = &std::cerr;

  if (!args.check.empty()) {
    json params = json::object();
    for (const auto& kv : args.params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--param expects key=value");
      params[kv.substr(0, eq)] = param_value(kv.substr(eq + 1));
    }
    if (!args.a.empty()) params["a"] = args.a;
    if (!args.b.empty()) params["b"] = args.b;
    if (!args.poly.empty()) params["poly"] = args.poly;
    if (!args.f.empty()) params["f"] = args.f;
    if (!args.g.empty()) params["g"] = args.g;
    if (args.alpha) params["alpha"] = *args.alpha;
    auto report = gpm::run_check(args.check, params, args.common.seed);
    emit_json(args.common.output, report.to_json(opts.timestamp));
    return report.assertive && report.failed() ? kExitFailure : kExitOk;
  }

  gpm::SuiteConfig config;
  if (!args.suite.empty()) {
    if (args.suite != "paper-default") throw gpm::ConfigError("unknown suite '" + args.suite + "'");
    config = gpm::paper_default_suite(args.common.seed);
  } else {
    std::ifstream in(args.config);
    if (!in) throw gpm::ConfigError("cannot open " + args.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw gpm::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    config = gpm::parse_suite(j);
  }
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  auto result = gpm::run_suite(config, opts);
  json out = result.summary();
  out["seed"] = args.common.seed;
  json reports = json::array();
  for (const auto& r : result.reports) reports.push_back(r.to_json(opts.timestamp));
  out["results"] = reports;
  emit_json(args.common.output, out);
  return result.any_assertive_failure ? kExitFailure : kExitOk;
}

// --- malliavin

struct MalliavinArgs {
  Common common;
  std::string map;
};

int cmd_malliavin(const MalliavinArgs& args) {
  gpm::PolynomialMap f = gpm::parse_map(args.map);
  auto s = gpm::summarize(f, args.common.n_samples, args.common.seed);
  json out = envelope("malliavin", args.common);
  out.erase("discretization");
  out["map"] = f.to_string();
  out["summary"] = s.to_json();
  out["malliavin_det"] = f.k() <= gpm::kMaxSymbolicDet ? json(gpm::to_string(gpm::malliavin_det(f))) : json(nullptr);
  emit_json(args.common.output, out);
  return kExitOk;
}

// --- sample

struct SampleArgs {
  Common common;
  std::string map;
};

int cmd_sample(const SampleArgs& args) {
  gpm::PolynomialMap f = gpm::parse_map(args.map);
  std::size_t n_vars = std::max<std::size_t>(1, f.n_vars());
  std::vector<gpm::Polynomial> comps;
  for (const auto& c : f.components()) comps.push_back(c.with_n_vars(n_vars));
  auto samples = gpm::pushforward(gpm::PolynomialMap(comps), gpm::sample_gaussian(n_vars, args.common.n_samples, args.common.seed));
  std::ostringstream out;
  gpm::write_csv(out, samples);
  emit(args.common.output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probability metrics, Besov profiles and Malliavin diagnostics for Gaussian polynomial laws"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  DistArgs dist;
  auto* d = app.add_subcommand("dist", "Distance between two measures");
  d->add_option("--metric", dist.metric, "tv | k | kr | fm")
      ->check(CLI::IsMember({"tv", "k", "kr", "fm"}))
      ->capture_default_str();
  d->add_option("--a", dist.a, "First measure spec")->required();
  d->add_option("--b", dist.b, "Second measure spec")->required();
  add_common(d, dist.common);

  BesovArgs besov;
  auto* b = app.add_subcommand("besov", "Shift-TV profile, seminorm lower bound and fitted order");
  b->add_option("--measure", besov.measure, "Measure spec");
  b->add_option("--poly", besov.poly, "Polynomial map (components separated by ';')");
  b->add_option("--alpha", besov.alpha, "Smoothness order for the seminorm")->capture_default_str();
  b->add_flag("--fit", besov.fit, "Fit the order from the smallest shifts");
  b->add_option("--decades", besov.decades, "Fit window in decades (0: 2 for exact laws, else 1)")->capture_default_str();
  b->add_option("--directions", besov.directions, "Directions on the half circle for k = 2")->capture_default_str();
  b->add_option("--csv", besov.csv, "Write the (h, tv) profile CSV here");
  add_common(b, besov.common);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run inequality checks");
  v->add_option("--suite", verify.suite, "Built-in suite name (paper-default)");
  v->add_option("--config", verify.config, "Suite config JSON {suite: [{check, params, seed}], output_dir}");
  std::string names;
  for (const auto& n : gpm::check_names()) names += (names.empty() ? "" : ", ") + n;
  v->add_option("--check", verify.check, "Single check: " + names);
  v->add_option("--param", verify.params, "Check parameter key=value (value parsed as JSON when possible)");
  v->add_option("--a", verify.a, "Parameter 'a' of a single check");
  v->add_option("--b", verify.b, "Parameter 'b' of a single check");
  v->add_option("--poly", verify.poly, "Parameter 'poly' of a single check");
  v->add_option("--f", verify.f, "Parameter 'f' of a single check");
  v->add_option("--g", verify.g, "Parameter 'g' of a single check");
  v->add_option("--alpha", verify.alpha, "Parameter 'alpha' of a single check");
  v->add_flag("--no-timestamp", verify.no_timestamp, "Omit timestamps so reruns are byte-identical");
  v->add_option("--output-dir", verify.output_dir, "Write one JSON per check and summary.csv here");
  v->add_flag("-q,--quiet", verify.quiet, "No progress lines on stderr");
  add_common(v, verify.common, false);

  MalliavinArgs mall;
  auto* m = app.add_subcommand("malliavin", "Malliavin determinant, component spreads and hypothesis flags");
  m->add_option("--map", mall.map, "Polynomial map (components separated by ';')")->required();
  add_common(m, mall.common, false);

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Sample the pushforward of the standard Gaussian as CSV");
  s->add_option("--map", sample.map, "Polynomial map (components separated by ';')")->required();
  add_common(s, sample.common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (d->parsed()) return cmd_dist(dist);
    if (b->parsed()) return cmd_besov(besov);
    if (v->parsed()) return cmd_verify(verify);
    if (m->parsed()) return cmd_malliavin(mall);
    return cmd_sample(sample);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // SpecError, ConfigError, ParseError-derived input errors
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gpm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return kExitFailure;
  }
}

#include "gpm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gpm/parallel.hpp"
#include "gpm/rng.hpp"
#include "gpm/special.hpp"

namespace gpm {

namespace {
constexpr std::size_t kChunk = 1 << 14;
constexpr double kKernelReach = 8.0;  // bandwidths
constexpr double kPadding = 4.0;      // bandwidths beyond the sample range
constexpr std::size_t kMinKdeSamples = 30;
}  // namespace

std::vector<double> SampleSet::coordinate(std::size_t j) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i * dim + j];
  return out;
}

SampleSet sample_gaussian(std::size_t n_vars, std::size_t n_samples, std::uint64_t seed) {
  if (n_vars == 0 || n_samples == 0) throw std::invalid_argument("sample_gaussian needs n_vars, n_samples >= 1");
  SampleSet s{n_vars, std::vector<double>(n_vars * n_samples), seed, std::string(kGeneratorId)};
  std::size_t total = s.values.size();
  std::size_t n_chunks = (total + kChunk - 1) / kChunk;
  parallel_chunks(n_chunks, [&](std::size_t c) {
    std::size_t begin = c * kChunk, end = std::min(total, begin + kChunk);
    fill_standard_normal(seed, 0, begin, std::span<double>(s.values).subspan(begin, end - begin));
  });
  return s;
}

SampleSet pushforward(const PolynomialMap& f, const SampleSet& s) {
  if (s.dim != f.n_vars())
    throw std::invalid_argument("pushforward: samples have dimension " + std::to_string(s.dim) + ", map expects " +
                                std::to_string(f.n_vars()));
  std::vector<CompiledPolynomial> comps;
  for (const auto& c : f.components()) comps.emplace_back(c);
  std::size_t k = f.k(), n = s.size();
  SampleSet out{k, std::vector<double>(k * n), s.seed, "pushforward" + f.to_string() + "|" + s.generator_id};
  std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  parallel_chunks(n_chunks, [&](std::size_t c) {
    std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i)
      for (std::size_t j = 0; j < k; ++j) out.values[i * k + j] = comps[j](s.point(i));
  });
  return out;
}

SampleSet prefix(const SampleSet& s, std::size_t n) {
  n = std::min(n, s.size());
  SampleSet out = s;
  out.values.resize(n * s.dim);
  return out;
}

namespace {

std::pair<double, double> mean_sd(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(x.size() - 1))};
}

std::vector<double> cell_kernel(double w, double bw) {
  long reach = static_cast<long>(std::ceil(kKernelReach * bw / w)) + 1;
  std::vector<double> k(static_cast<std::size_t>(2 * reach + 1));
  for (long m = -reach; m <= reach; ++m)
    k[static_cast<std::size_t>(m + reach)] = normal_cdf((m + 0.5) * w / bw) - normal_cdf((m - 0.5) * w / bw);
  return k;
}

// Convolves point masses at cell centers with a cell-integrated kernel.
void convolve_line(const std::vector<double>& mass, const std::vector<double>& kernel, std::vector<double>& out) {
  long reach = static_cast<long>(kernel.size() / 2);
  long n = static_cast<long>(mass.size());
  for (long j = 0; j < n; ++j) {
    double m = mass[static_cast<std::size_t>(j)];
    if (m == 0.0) continue;
    long lo = std::max(-reach, -j), hi = std::min(reach, n - 1 - j);
    for (long d = lo; d <= hi; ++d) out[static_cast<std::size_t>(j + d)] += m * kernel[static_cast<std::size_t>(d + reach)];
  }
}

// Linear binning weight split between the two nearest cell centers.
void bin_linear(double x, const GridAxis& a, std::size_t& i0, double& w0) {
  double t = (x - a.lo) / a.width() - 0.5;
  double fl = std::floor(t);
  long i = static_cast<long>(fl);
  double frac = t - fl;
  if (i < 0) {
    i0 = 0;
    w0 = 1.0;
  } else if (i >= static_cast<long>(a.n) - 1) {
    i0 = a.n - 2;
    w0 = 0.0;
  } else {
    i0 = static_cast<std::size_t>(i);
    w0 = 1.0 - frac;
  }
}

}  // namespace

double silverman_bandwidth(std::span<const double> x) {
  auto [m, sd] = mean_sd(x);
  return 1.06 * sd * std::pow(static_cast<double>(x.size()), -0.2);
}

double scott_bandwidth_2d(std::span<const double> x) {
  auto [m, sd] = mean_sd(x);
  return sd * std::pow(static_cast<double>(x.size()), -1.0 / 6.0);
}

KdeResult kde(const SampleSet& s, const KdeOptions& options) {
  if (s.size() < kMinKdeSamples) throw std::invalid_argument("kde needs at least 30 samples");
  if (s.dim != 1 && s.dim != 2) throw std::invalid_argument("kde supports dimension 1 or 2");
  std::vector<std::vector<double>> coords;
  std::vector<double> bw;
  for (std::size_t j = 0; j < s.dim; ++j) {
    coords.push_back(s.coordinate(j));
    auto [m, sd] = mean_sd(coords.back());
    if (!(sd > 0.0)) throw std::invalid_argument("kde: zero-variance sample (law is a point mass)");
    if (s.dim == 1) bw.push_back(options.bandwidth.value_or(silverman_bandwidth(coords.back())));
    else bw.push_back(options.bandwidth_2d ? (*options.bandwidth_2d)[j] : scott_bandwidth_2d(coords.back()));
    if (!(bw.back() > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
  }
  std::vector<GridAxis> axes;
  if (options.axes) {
    axes = *options.axes;
    if (axes.size() != s.dim) throw std::invalid_argument("kde: grid dimension mismatch");
    for (std::size_t j = 0; j < s.dim; ++j) {
      auto [mn, mx] = std::minmax_element(coords[j].begin(), coords[j].end());
      if (axes[j].lo > *mn - 3 * bw[j] || axes[j].hi < *mx + 3 * bw[j])
        throw std::invalid_argument("kde: grid must cover the samples padded by 3 bandwidths");
    }
  } else {
    for (std::size_t j = 0; j < s.dim; ++j) {
      auto [mn, mx] = std::minmax_element(coords[j].begin(), coords[j].end());
      axes.push_back(make_axis(*mn - kPadding * bw[j], *mx + kPadding * bw[j],
                               s.dim == 1 ? options.cells_1d : options.cells_2d));
    }
  }
  GridFunction binned(axes);
  std::size_t n = s.size();
  double unit = 1.0 / static_cast<double>(n);
  if (s.dim == 1) {
    for (double x : coords[0]) {
      std::size_t i;
      double w;
      bin_linear(x, axes[0], i, w);
      binned.values[i] += unit * w;
      binned.values[i + 1] += unit * (1.0 - w);
    }
    GridFunction out(axes);
    convolve_line(binned.values, cell_kernel(axes[0].width(), bw[0]), out.values);
    return {GridDensity(out).function(), bw};
  }
  std::size_t ny = axes[1].n;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t i, j;
    double wi, wj;
    bin_linear(coords[0][p], axes[0], i, wi);
    bin_linear(coords[1][p], axes[1], j, wj);
    binned.values[i * ny + j] += unit * wi * wj;
    binned.values[i * ny + j + 1] += unit * wi * (1 - wj);
    binned.values[(i + 1) * ny + j] += unit * (1 - wi) * wj;
    binned.values[(i + 1) * ny + j + 1] += unit * (1 - wi) * (1 - wj);
  }
  std::size_t nx = axes[0].n;
  auto kx = cell_kernel(axes[0].width(), bw[0]);
  auto ky = cell_kernel(axes[1].width(), bw[1]);
  GridFunction stage(axes), out(axes);
  std::vector<double> line_in, line_out;
  for (std::size_t i = 0; i < nx; ++i) {
    line_in.assign(binned.values.begin() + static_cast<long>(i * ny), binned.values.begin() + static_cast<long>((i + 1) * ny));
    line_out.assign(ny, 0.0);
    convolve_line(line_in, ky, line_out);
    std::copy(line_out.begin(), line_out.end(), stage.values.begin() + static_cast<long>(i * ny));
  }
  for (std::size_t j = 0; j < ny; ++j) {
    line_in.resize(nx);
    line_out.assign(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) line_in[i] = stage.values[i * ny + j];
    convolve_line(line_in, kx, line_out);
    for (std::size_t i = 0; i < nx; ++i) out.values[i * ny + j] = line_out[i];
  }
  return {GridDensity(out).function(), bw};
}

GridDensity kde_density(const SampleSet& s, const KdeOptions& options) { return GridDensity(kde(s, options).density); }

std::size_t count_modes(const GridFunction& g, double relative_height) {
  if (g.dim() != 1) throw std::invalid_argument("count_modes expects a 1D grid");
  const auto& v = g.values;
  double top = *std::max_element(v.begin(), v.end());
  std::size_t modes = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double left = i > 0 ? v[i - 1] : 0.0, right = i + 1 < v.size() ? v[i + 1] : 0.0;
    if (v[i] > left && v[i] >= right && v[i] >= relative_height * top) ++modes;
  }
  return modes;
}

double sample_abs_moment(const SampleSet& s, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("moment order must be non-negative");
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r2 = 0.0;
    for (double v : s.point(i)) r2 += v * v;
    total += std::pow(std::sqrt(r2), p);
  }
  return total / static_cast<double>(s.size());
}

void write_csv(std::ostream& out, const SampleSet& s) {
  out << "# seed=" << s.seed << " generator=" << s.generator_id << "\n";
  for (std::size_t j = 0; j < s.dim; ++j) out << (j ? "," : "") << "x" << (j + 1);
  out << "\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    line.str("");
    for (std::size_t j = 0; j < s.dim; ++j) line << (j ? "," : "") << s.values[i * s.dim + j];
    out << line.str() << "\n";
  }
}

SampleSet read_csv(std::istream& in) {
  SampleSet s;
  s.dim = 0;
  s.generator_id = "csv";
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto seed_at = line.find("seed=");
      if (seed_at != std::string::npos) s.seed = std::stoull(line.substr(seed_at + 5));
      auto gen_at = line.find("generator=");
      if (gen_at != std::string::npos) s.generator_id = line.substr(gen_at + 10);
      continue;
    }
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    bool numeric = true;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (header_seen || !s.values.empty()) throw std::invalid_argument("non-numeric CSV row at line " + std::to_string(line_no));
      header_seen = true;
      continue;
    }
    if (s.dim == 0) s.dim = row.size();
    if (row.size() != s.dim) throw std::invalid_argument("CSV row " + std::to_string(line_no) + " has wrong width");
    s.values.insert(s.values.end(), row.begin(), row.end());
  }
  if (s.dim == 0) throw std::invalid_argument("CSV contains no sample rows");
  return s;
}

}  // namespace gpm

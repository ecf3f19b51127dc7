#include "gpm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "gpm/special.hpp"

namespace gpm {

GridAxis make_axis(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n == 0 || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("grid axis needs lo < hi and at least one cell");
  return GridAxis{lo, hi, n};
}

GridFunction::GridFunction(std::vector<GridAxis> ax) : axes(std::move(ax)) {
  if (axes.empty() || axes.size() > 2) throw std::invalid_argument("grid functions are 1D or 2D");
  std::size_t cells = 1;
  for (const auto& a : axes) cells *= a.n;
  values.assign(cells, 0.0);
}

double GridFunction::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.width();
  return v;
}

double GridFunction::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_volume();
}

double GridFunction::l1_norm() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return s * cell_volume();
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (a.axes != b.axes) throw std::invalid_argument("grid functions live on different axes");
  GridFunction out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

GridFunction scaled(GridFunction g, double factor) {
  for (double& v : g.values) v *= factor;
  return g;
}

GridDensity::GridDensity(GridFunction g) : grid_(std::move(g)) {
  for (double v : grid_.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("grid density values must be finite and non-negative");
  double mass = grid_.integral();
  if (!(mass > 0.0)) throw std::invalid_argument("grid density has zero mass");
  for (double& v : grid_.values) v /= mass;
}

double GridDensity::boundary_mass() const {
  const auto& g = grid_;
  double s = 0.0;
  if (g.dim() == 1) {
    s = g.values.front() + (g.axes[0].n > 1 ? g.values.back() : 0.0);
  } else {
    std::size_t nx = g.axes[0].n, ny = g.axes[1].n;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) s += g.at(i, j);
  }
  return s * g.cell_volume();
}

double shift_l1(const GridFunction& g, std::span<const double> shift) {
  if (shift.size() != g.dim()) throw std::invalid_argument("shift dimension does not match grid");
  auto split = [](double h, double w) {
    double t = h / w;
    double s = std::floor(t);
    return std::pair{static_cast<long>(s), t - s};
  };
  if (g.dim() == 1) {
    long n = static_cast<long>(g.axes[0].n);
    auto [s, f] = split(shift[0], g.axes[0].width());
    auto get = [&](long i) { return i >= 0 && i < n ? g.values[static_cast<std::size_t>(i)] : 0.0; };
    double total = 0.0;
    for (long i = std::min(0L, s); i <= std::max(n - 1, n + s); ++i) {
      double v = get(i);
      total += f * std::abs(v - get(i - s - 1)) + (1.0 - f) * std::abs(v - get(i - s));
    }
    return total * g.axes[0].width();
  }
  long nx = static_cast<long>(g.axes[0].n), ny = static_cast<long>(g.axes[1].n);
  auto [sx, fx] = split(shift[0], g.axes[0].width());
  auto [sy, fy] = split(shift[1], g.axes[1].width());
  auto get = [&](long i, long j) {
    return i >= 0 && i < nx && j >= 0 && j < ny ? g.values[static_cast<std::size_t>(i * ny + j)] : 0.0;
  };
  const double wx[2] = {1.0 - fx, fx}, wy[2] = {1.0 - fy, fy};
  double total = 0.0;
  for (long i = std::min(0L, sx); i <= std::max(nx - 1, nx + sx); ++i) {
    for (long j = std::min(0L, sy); j <= std::max(ny - 1, ny + sy); ++j) {
      double v = get(i, j);
      double cell = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (wx[a] * wy[b] > 0.0) cell += wx[a] * wy[b] * std::abs(v - get(i - sx - a, j - sy - b));
      total += cell;
    }
  }
  return total * g.cell_volume();
}

namespace {

// Applies a line transform along one axis of a 1D or 2D grid function.
GridFunction along_axis(const GridFunction& g, std::size_t axis, const GridAxis& new_axis,
                        const std::function<void(const std::vector<double>&, std::vector<double>&)>& op) {
  auto axes = g.axes;
  axes[axis] = new_axis;
  GridFunction out(axes);
  if (g.dim() == 1) {
    op(g.values, out.values);
    return out;
  }
  std::size_t nx = g.axes[0].n, ny = g.axes[1].n;
  std::size_t mx = out.axes[0].n, my = out.axes[1].n;
  std::vector<double> in_line, out_line;
  if (axis == 0) {
    for (std::size_t j = 0; j < ny; ++j) {
      in_line.resize(nx);
      out_line.assign(mx, 0.0);
      for (std::size_t i = 0; i < nx; ++i) in_line[i] = g.values[i * ny + j];
      op(in_line, out_line);
      for (std::size_t i = 0; i < mx; ++i) out.values[i * my + j] = out_line[i];
    }
  } else {
    for (std::size_t i = 0; i < nx; ++i) {
      in_line.assign(g.values.begin() + static_cast<long>(i * ny), g.values.begin() + static_cast<long>((i + 1) * ny));
      out_line.assign(my, 0.0);
      op(in_line, out_line);
      std::copy(out_line.begin(), out_line.end(), out.values.begin() + static_cast<long>(i * my));
    }
  }
  return out;
}

// Second antiderivative of the standard normal density.
double second_antiderivative(double z) { return z * normal_cdf(z) + normal_pdf(z); }

}  // namespace

GridFunction convolve_gaussian(const GridFunction& g, double eps, double extend_sds) {
  if (!(eps > 0.0)) throw std::invalid_argument("smoothing scale must be positive");
  GridFunction out = g;
  for (std::size_t axis = 0; axis < g.dim(); ++axis) {
    const GridAxis src = out.axes[axis];
    double w = src.width();
    auto ext = static_cast<std::size_t>(std::ceil(extend_sds * eps / w));
    GridAxis dst{src.lo - ext * w, src.hi + ext * w, src.n + 2 * ext};
    long reach = static_cast<long>(std::ceil(extend_sds * eps / w)) + 1;
    std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
    for (long m = -reach; m <= reach; ++m) {
      double a = w / eps;
      kernel[static_cast<std::size_t>(m + reach)] =
          (second_antiderivative((m + 1) * a) - 2.0 * second_antiderivative(m * a) +
           second_antiderivative((m - 1) * a)) / a;
    }
    out = along_axis(out, axis, dst, [&](const std::vector<double>& in, std::vector<double>& res) {
      for (std::size_t j = 0; j < in.size(); ++j) {
        if (in[j] == 0.0) continue;
        long target = static_cast<long>(j + ext);
        for (long m = -reach; m <= reach; ++m) {
          long i = target + m;
          if (i < 0 || i >= static_cast<long>(res.size())) continue;
          res[static_cast<std::size_t>(i)] += in[j] * kernel[static_cast<std::size_t>(m + reach)];
        }
      }
    });
  }
  return out;
}

GridFunction remap(const GridFunction& g, const std::vector<GridAxis>& axes) {
  if (axes.size() != g.dim()) throw std::invalid_argument("remap: dimension mismatch");
  GridFunction out = g;
  for (std::size_t axis = 0; axis < g.dim(); ++axis) {
    const GridAxis src = out.axes[axis];
    const GridAxis dst = axes[axis];
    out = along_axis(out, axis, dst, [&](const std::vector<double>& in, std::vector<double>& res) {
      double ws = src.width(), wd = dst.width();
      for (std::size_t i = 0; i < dst.n; ++i) {
        double a = dst.edge(i), b = dst.edge(i + 1);
        long j0 = std::max(0L, static_cast<long>(std::floor((a - src.lo) / ws)));
        long j1 = std::min(static_cast<long>(src.n) - 1, static_cast<long>(std::floor((b - src.lo) / ws)));
        double mass = 0.0;
        for (long j = j0; j <= j1; ++j) {
          double lo = std::max(a, src.edge(static_cast<std::size_t>(j)));
          double hi = std::min(b, src.edge(static_cast<std::size_t>(j) + 1));
          if (hi > lo) mass += in[static_cast<std::size_t>(j)] * (hi - lo);
        }
        res[i] = mass / wd;
      }
    });
  }
  return out;
}

double bv_norm(const GridFunction& g) {
  if (g.dim() != 1) throw std::invalid_argument("bv_norm is defined for 1D grids");
  const auto& v = g.values;
  double s = std::abs(v.front()) + std::abs(v.back());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s += std::abs(v[i + 1] - v[i]);
  return s;
}

double lp_norm(const GridFunction& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : g.values) s += std::pow(std::abs(v), p);
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

double cdf_l1(const GridFunction& g) {
  if (g.dim() != 1) throw std::invalid_argument("cdf_l1 is defined for 1D grids");
  double w = g.axes[0].width();
  double left = 0.0, total = 0.0;
  for (double v : g.values) {
    double right = left + v * w;
    if ((left >= 0) == (right >= 0)) {
      total += 0.5 * w * std::abs(left + right);
    } else {
      total += 0.5 * w * (left * left + right * right) / (std::abs(left) + std::abs(right));
    }
    left = right;
  }
  return total;
}

nlohmann::json to_json(const GridDensity& g) {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : g.axes()) axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}});
  return {{"axes", axes}, {"values", g.values()}};
}

GridDensity grid_density_from_json(const nlohmann::json& j) {
  std::vector<GridAxis> axes;
  for (const auto& a : j.at("axes"))
    axes.push_back(make_axis(a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("n").get<std::size_t>()));
  GridFunction g(axes);
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != g.values.size())
    throw std::invalid_argument("grid density has " + std::to_string(values.size()) + " values, expected " +
                                std::to_string(g.values.size()));
  g.values = std::move(values);
  return GridDensity(std::move(g));
}

}  // namespace gpm

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpm/grid.hpp"
#include "gpm/polynomial.hpp"

namespace gpm {

// Equally weighted point cloud in R^dim, stored row-major.
struct SampleSet {
  std::size_t dim = 1;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string generator_id;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(values).subspan(i * dim, dim);
  }
  std::vector<double> coordinate(std::size_t j) const;
};

SampleSet sample_gaussian(std::size_t n_vars, std::size_t n_samples, std::uint64_t seed);
SampleSet pushforward(const PolynomialMap& f, const SampleSet& s);
// First n points of s (same provenance, marked as a prefix).
SampleSet prefix(const SampleSet& s, std::size_t n);

double silverman_bandwidth(std::span<const double> x);
double scott_bandwidth_2d(std::span<const double> x);

struct KdeOptions {
  std::optional<double> bandwidth;               // 1D; Silverman's rule when empty
  std::optional<std::array<double, 2>> bandwidth_2d;  // per axis; Scott's rule when empty
  std::optional<std::vector<GridAxis>> axes;     // default: sample range padded by 4 bandwidths
  std::size_t cells_1d = 4096;
  std::size_t cells_2d = 256;
};

struct KdeResult {
  GridFunction density;  // unit mass
  std::vector<double> bandwidth;
};

// Gaussian-kernel estimate by linear binning and exact cell-integrated kernels.
KdeResult kde(const SampleSet& s, const KdeOptions& options = {});
GridDensity kde_density(const SampleSet& s, const KdeOptions& options = {});

// Local maxima of a 1D grid function exceeding `relative_height` times the global max.
std::size_t count_modes(const GridFunction& g, double relative_height = 0.05);

// E|X|^p with |.| the Euclidean norm.
double sample_abs_moment(const SampleSet& s, double p);

void write_csv(std::ostream& out, const SampleSet& s);
SampleSet read_csv(std::istream& in);

}  // namespace gpm

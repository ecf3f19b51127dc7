#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpm/parallel.hpp"
#include "gpm/polynomial.hpp"
#include "gpm/rng.hpp"

namespace gpm {

MonteCarloEstimate lp_norm_mc(const Polynomial& p, double pexp, std::size_t n_samples,
                              std::uint64_t seed) {
  if (!(pexp >= 1.0)) throw std::invalid_argument("lp_norm_mc: exponent must be >= 1");
  if (n_samples == 0) throw std::invalid_argument("lp_norm_mc: need at least one sample");
  CompiledPolynomial eval(p);
  std::size_t n = std::max<std::size_t>(p.n_vars(), 1);
  constexpr std::size_t chunk = 1 << 14;
  std::size_t n_chunks = (n_samples + chunk - 1) / chunk;
  std::vector<double> sums(n_chunks), squares(n_chunks);
  parallel_chunks(n_chunks, [&](std::size_t c) {
    std::size_t begin = c * chunk, end = std::min(n_samples, begin + chunk);
    std::vector<double> x((end - begin) * n);
    fill_standard_normal(seed, 0, begin * n, x);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < end - begin; ++i) {
      double v = std::pow(std::abs(eval(std::span<const double>(x).subspan(i * n, n))), pexp);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    squares[c] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    s += sums[c];
    s2 += squares[c];
  }
  if (!std::isfinite(s) || !std::isfinite(s2))
    throw std::overflow_error("lp_norm_mc: non-finite accumulation (degree or exponent too large)");
  double N = static_cast<double>(n_samples);
  double mean = s / N;
  double var = n_samples > 1 ? std::max(0.0, (s2 - N * mean * mean) / (N - 1)) : 0.0;
  MonteCarloEstimate out;
  out.n_samples = n_samples;
  out.value = std::pow(mean, 1.0 / pexp);
  out.std_error = mean > 0 ? out.value / (pexp * mean) * std::sqrt(var / N) : 0.0;
  return out;
}

}  // namespace gpm

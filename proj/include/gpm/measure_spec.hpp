#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "gpm/measure.hpp"

namespace gpm {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SpecContext {
  std::size_t n_samples = 200000;  // for sampled laws
  std::uint64_t seed = 0;
  std::filesystem::path base_dir = ".";
};

// Measure mini-language:
//   gauss(m,s)  gauss2(m1,m2,s)  monpow(d,h)  chisq1()  dirac(x)  atoms(x1,x2,...)
//   grid(file)  samples(file)  pushforward(polyfile)  poly(p1; p2; ...)
// poly() of a single polynomial in one variable is exact; other maps are sampled.
Measure parse_measure(const std::string& spec, const SpecContext& ctx = {});

// Components of a polynomial map separated by ';' or newlines.
PolynomialMap parse_map(const std::string& text);

}  // namespace gpm

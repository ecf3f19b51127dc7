#pragma once

#include <random>

#include "gpm/polynomial.hpp"

namespace testutil {

// Random polynomial with small rational coefficients, degree ≤ max_degree, n ≤ max_vars variables.
inline gpm::Polynomial random_polynomial(std::mt19937_64& rng, unsigned max_degree, unsigned max_vars,
                                         unsigned max_terms = 6) {
  std::uniform_int_distribution<unsigned> nvars(1, max_vars), nterms(1, max_terms), deg(0, max_degree);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  unsigned n = nvars(rng);
  std::uniform_int_distribution<unsigned> var(1, n);
  std::vector<gpm::Monomial> terms;
  for (unsigned t = nterms(rng); t > 0; --t) {
    std::vector<gpm::Exponents::Entry> e;
    for (unsigned d = deg(rng); d > 0; --d) e.emplace_back(var(rng), 1);
    long a = num(rng);
    terms.push_back({gpm::Exponents::from_pairs(e), gpm::Rational(a == 0 ? 1 : a) / gpm::Rational(den(rng))});
  }
  return gpm::Polynomial::from_terms(terms, n);
}

}  // namespace testutil

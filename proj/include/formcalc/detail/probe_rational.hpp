#pragma once

#include <random>

namespace formcalc {

template <class Rng>
Rational random_probe_rational(Rng& rng) {
  std::uniform_int_distribution<long> den_dist(1, 7);
  const long den = den_dist(rng);
  std::uniform_int_distribution<long> num_dist(-3 * den, 3 * den);
  Rational r(num_dist(rng), den);
  r.canonicalize();
  return r;
}

}  // namespace formcalc

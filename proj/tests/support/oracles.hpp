#pragma once

#include <optional>
#include <vector>

#include "hzlab/rational.hpp"

namespace hzlab::oracles {

// Best value over every support of size one or two, solving the tight
// budget system directly.
inline Rational brute_force_value(const std::vector<Rational>& u, const std::vector<Rational>& p) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& v) {
    if (!best || v > *best) best = v;
  };
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (p[j] <= 1) consider(u[j]);
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (j == k || p[j] == p[k]) continue;
      // x p_j + (1 - x) p_k = 1
      Rational x = (1 - p[k]) / (p[j] - p[k]);
      if (x < 0 || x > 1) continue;
      consider(x * u[j] + (1 - x) * u[k]);
    }
  }
  return *best;
}

}  // namespace hzlab::oracles

#pragma once

#include <string>
#include <vector>

#include "hzlab/market.hpp"
#include "hzlab/rational.hpp"

namespace hzlab::samples {

inline Rational q(long a, long b = 1) { return rational(a, b); }

// Two agent groups of size 2 and three goods (G1, G2 x2, G3) with three
// isolated equilibria.
inline GroupedMarket disconnected() {
  return GroupedMarket("disconnected", {{"G1", 1}, {"G2", 2}, {"G3", 1}},
                       {{"A1", 2, {{"G1", q(1, 2)}, {"G2", q(1)}}}, {"A2", 2, {{"G2", q(1)}, {"G3", q(1, 2)}}}}, true);
}

inline PriceVector prices(std::vector<Rational> v) { return PriceVector(std::move(v)); }

inline Allocation allocation(const std::vector<std::vector<Rational>>& rows) {
  Allocation x(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t g = 0; g < rows[a].size(); ++g) x.at(a, g) = rows[a][g];
  return x;
}

struct Pair {
  PriceVector p;
  Allocation x;
};

inline std::vector<Pair> disconnected_equilibria() {
  return {
      {prices({q(0), q(2), q(0)}), allocation({{q(1, 2), q(1, 2), q(0)}, {q(0), q(1, 2), q(1, 2)}})},
      {prices({q(0), q(8, 5), q(4, 5)}), allocation({{q(3, 8), q(5, 8), q(0)}, {q(1, 8), q(3, 8), q(1, 2)}})},
      {prices({q(4, 5), q(8, 5), q(0)}), allocation({{q(1, 2), q(3, 8), q(1, 8)}, {q(0), q(5, 8), q(3, 8)}})},
  };
}

// Three agents and three goods; utilities scaled from (100,10,0),
// (100,10,0), (100,80,0).
inline GroupedMarket intro() {
  return GroupedMarket("intro", {{"g1", 1}, {"g2", 1}, {"g3", 1}},
                       {{"a1", 1, {{"g1", q(1)}, {"g2", q(1, 10)}}},
                        {"a2", 1, {{"g1", q(1)}, {"g2", q(1, 10)}}},
                        {"a3", 1, {{"g1", q(1)}, {"g2", q(4, 5)}}}},
                       true);
}

}  // namespace hzlab::samples

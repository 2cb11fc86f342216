#pragma once

// Two-buyer sub-market whose normalized equilibrium prices form the
// segment (p, 2 - p, 0), p in [0, delta].
//
// Goods: "cheap" (utility 1 / (2/delta - 1) to the buyers), "dear"
// (utility 1) and a zero-utility "dummy" held by a reference agent. At
// prices (p, 2 - p, 0) a buyer's split 1/2 cheap + 1/2 dear is worth
// (1 + u) / 2 against 1 / (2 - p) for dear + dummy; the split is optimal
// exactly when p <= delta.

#include <stdexcept>
#include <utility>

#include "hzlab/market.hpp"
#include "hzlab/ppad.hpp"
#include "hzlab/rational.hpp"

namespace hzlab {

inline Rational toy_cheap_utility(const Rational& delta) { return 1 / (2 / delta - 1); }

inline GroupedMarket build_toy_submarket(const Rational& delta) {
  if (delta <= 0 || delta >= 1) throw ReductionError("delta must lie in (0, 1), got " + to_string(delta));
  return GroupedMarket("toy(delta=" + to_string(delta) + ")", {{"cheap", 1}, {"dear", 1}, {"dummy", 1}},
                       {{"buyers", 2, {{"cheap", toy_cheap_utility(delta)}, {"dear", Rational(1)}}},
                        {"reference", 1, {{"dummy", Rational(1)}}}},
                       true);
}

inline PriceVector toy_prices(const Rational& p) { return PriceVector({p, Rational(2 - p), Rational(0)}); }

/// Budget-tight split: each buyer takes half of each priced good.
inline Allocation toy_allocation() {
  Allocation x(2, 3);
  x.at(0, 0) = rational(1, 2);
  x.at(0, 1) = rational(1, 2);
  x.at(1, 2) = 1;
  return x;
}

}  // namespace hzlab

#pragma once

// Replicating every agent and every good N times, and pulling an
// equilibrium of the replicated market back to the original one.
//
// In group form a replica group of N c members facing a good group of
// N c' units keeps the same per-member allocation, and the minimum price
// over replicas of a group is its single group price, so both directions
// leave (x, p) unchanged once the padded pair is verified.

#include <string>
#include <utility>
#include <vector>

#include "hzlab/equilibrium.hpp"
#include "hzlab/market.hpp"
#include "hzlab/ppad.hpp"
#include "hzlab/rational.hpp"

namespace hzlab {

inline GroupedMarket pad_market(const GroupedMarket& m, const Integer& n) {
  if (n < 1) throw ReductionError("padding factor must be at least 1");
  std::vector<GoodGroup> goods = m.goods();
  std::vector<AgentGroup> agents = m.agents();
  for (auto& g : goods) g.count *= n;
  for (auto& a : agents) a.count *= n;
  const std::string label = n == 1 ? m.label() : m.label() + " x" + n.get_str();
  return GroupedMarket(label, std::move(goods), std::move(agents), m.max_utility_one());
}

struct PulledBack {
  Allocation x;
  PriceVector p;
};

/// Requires (x*, p*) to pass verify_approx on pad_market(m, n) at `eps`.
inline PulledBack unpad_equilibrium(const GroupedMarket& m, const Integer& n, const Allocation& padded_x,
                                    const PriceVector& padded_p, const Rational& eps) {
  const GroupedMarket padded = pad_market(m, n);
  const Verdict v = verify_approx(padded, padded_x, padded_p, eps);
  if (!v.pass())
    throw ReductionError("input is not an approximate equilibrium of the padded market (" + v.violations.front().condition +
                         " at " + v.violations.front().subject + ")");
  return {padded_x, padded_p};
}

}  // namespace hzlab

#pragma once

// Threshold game -> HZ market construction, the price-to-profile map, and
// central-value predictions for the variable and edge gadgets.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hzlab/demand.hpp"
#include "hzlab/market.hpp"
#include "hzlab/rational.hpp"
#include "hzlab/threshold_game.hpp"

namespace hzlab {

class ReductionError : public std::runtime_error {
 public:
  explicit ReductionError(const std::string& what) : std::runtime_error(what) {}
};

struct PpadNodeIndex {
  std::size_t g1 = 0, g2 = 0, g3 = 0;  // good groups
  std::size_t agents = 0;
};

struct PpadEdgeIndex {
  std::size_t u = 0, v = 0;
  std::size_t good = 0;                  // G_e
  std::size_t star = 0;                  // A_{e,*}
  std::size_t first = 0;                 // A_{e,1}
  std::vector<std::size_t> second;       // A_{e,2,l}, l = 1..m
  std::vector<std::size_t> third;        // A_{e,3,l}, l = 1..m
  std::vector<std::size_t> fourth;       // A_{e,4,l}, l = 1..2m
};

struct PpadIndex {
  std::vector<PpadNodeIndex> nodes;
  std::vector<PpadEdgeIndex> edges;
  std::size_t dummy = 0;
};

struct PpadInstance {
  ThresholdGame game;
  long m;
  GroupedMarket market;
  PpadIndex index;
};

namespace ppad_ids {
inline std::string good(std::size_t v, int k) { return "G[" + std::to_string(v) + "]." + std::to_string(k); }
inline std::string node_agents(std::size_t v) { return "A[" + std::to_string(v) + "]"; }
inline std::string edge(std::size_t u, std::size_t v) { return std::to_string(u) + "->" + std::to_string(v); }
inline std::string edge_good(std::size_t u, std::size_t v) { return "G[" + edge(u, v) + "]"; }
inline std::string edge_agents(std::size_t u, std::size_t v, const std::string& suffix) {
  return "A[" + edge(u, v) + "]." + suffix;
}
inline const std::string dummy = "dummy";
}  // namespace ppad_ids

/// S_v = (24m^3 + 12m) outdeg(v) + (24m^3 + 15m) indeg(v) - 3m.
inline Integer ppad_offset(long m, std::size_t out_degree, std::size_t in_degree) {
  const Integer M(m);
  return (24 * M * M * M + 12 * M) * Integer(static_cast<unsigned long>(out_degree)) +
         (24 * M * M * M + 15 * M) * Integer(static_cast<unsigned long>(in_degree)) - 3 * M;
}

/// 5 m^10 |V| + (64 m^5 + 48 m^3 + 50 m) |E|.
inline Integer ppad_agent_count(long m, std::size_t nodes, std::size_t edges) {
  const Integer M(m);
  return 5 * ipow(M, 10) * Integer(static_cast<unsigned long>(nodes)) +
         (64 * ipow(M, 5) + 48 * ipow(M, 3) + 50 * M) * Integer(static_cast<unsigned long>(edges));
}

/// 3 m |V| + (32 m^5 + 23 m) |E|.
inline Integer ppad_dummy_count(long m, std::size_t nodes, std::size_t edges) {
  const Integer M(m);
  return 3 * M * Integer(static_cast<unsigned long>(nodes)) +
         (32 * ipow(M, 5) + 23 * M) * Integer(static_cast<unsigned long>(edges));
}

inline PpadInstance build_ppad_market(const ThresholdGame& game, long m) {
  if (m < 2) throw ReductionError("m must be at least 2");
  for (std::size_t v = 0; v < game.num_nodes(); ++v)
    if (game.in_degree(v) > 3 || game.out_degree(v) > 3)
      throw ReductionError("node " + std::to_string(v) + " exceeds degree 3");
  const Integer M(m);
  const Integer m10 = ipow(M, 10), m5 = ipow(M, 5), m3 = ipow(M, 3), m2 = M * M;
  const Rational two_m3(2 * m3);

  std::vector<GoodGroup> goods;
  std::vector<AgentGroup> agents;
  PpadIndex index;

  for (std::size_t v = 0; v < game.num_nodes(); ++v) {
    const Integer first = m10 + ppad_offset(m, game.out_degree(v), game.in_degree(v));
    if (first <= 0) throw ReductionError("non-positive size for " + ppad_ids::good(v, 1));
    PpadNodeIndex n;
    n.g1 = goods.size();
    goods.push_back({ppad_ids::good(v, 1), first});
    n.g2 = goods.size();
    goods.push_back({ppad_ids::good(v, 2), 2 * m10});
    n.g3 = goods.size();
    goods.push_back({ppad_ids::good(v, 3), 2 * m10});
    n.agents = agents.size();
    Rational u1(1, 2 * m2 - 1), u2(m2 + 1, 4 * m2 - 2);
    u1.canonicalize();
    u2.canonicalize();
    agents.push_back({ppad_ids::node_agents(v), 5 * m10,
                      {{ppad_ids::good(v, 1), u1}, {ppad_ids::good(v, 2), u2}, {ppad_ids::good(v, 3), Rational(1)}}});
    index.nodes.push_back(n);
  }

  Rational gadget_utility = Rational(1, 4) + Rational(1) / (4 * Rational(m2)) + Rational(1) / Rational(m3);
  for (const auto& [u, v] : game.edges()) {
    PpadEdgeIndex e;
    e.u = u;
    e.v = v;
    const std::string ge = ppad_ids::edge_good(u, v);
    e.good = goods.size();
    goods.push_back({ge, 32 * m5});
    e.star = agents.size();
    agents.push_back({ppad_ids::edge_agents(u, v, "*"), 64 * m5, {{ge, Rational(1)}}});
    e.first = agents.size();
    agents.push_back({ppad_ids::edge_agents(u, v, "1"), 48 * m3,
                      {{ppad_ids::good(u, 3), Rational(1)}, {ppad_ids::good(v, 1), rational(1, 2)}}});
    for (long l = 1; l <= m; ++l) {
      e.second.push_back(agents.size());
      agents.push_back({ppad_ids::edge_agents(u, v, "2." + std::to_string(l)), 6,
                        {{ge, Rational(1)}, {ppad_ids::good(v, 1), Rational(l) / two_m3}}});
    }
    for (long l = 1; l <= m; ++l) {
      e.third.push_back(agents.size());
      agents.push_back({ppad_ids::edge_agents(u, v, "3." + std::to_string(l)), 8,
                        {{ge, Rational(1)}, {ppad_ids::good(u, 1), Rational(l) / two_m3}}});
    }
    for (long l = 1; l <= 2 * m; ++l) {
      e.fourth.push_back(agents.size());
      agents.push_back({ppad_ids::edge_agents(u, v, "4." + std::to_string(l)), 18,
                        {{ge, Rational(1)},
                         {ppad_ids::good(v, 1), Rational(l) / two_m3},
                         {ppad_ids::good(u, 2), gadget_utility}}});
    }
    index.edges.push_back(std::move(e));
  }

  index.dummy = goods.size();
  goods.push_back({ppad_ids::dummy, ppad_dummy_count(m, game.num_nodes(), game.edges().size())});

  GroupedMarket market("ppad(m=" + std::to_string(m) + ")", std::move(goods), std::move(agents), true);
  if (market.total_agents() != market.total_goods())
    throw ReductionError("constructed market is unbalanced");
  return {game, m, std::move(market), std::move(index)};
}

/// x_v = min(1, m^2 p(G_{v,1})).
inline Profile extract_threshold_profile(const PpadInstance& inst, const PriceVector& p) {
  check_shape(inst.market, p);
  const Rational m2(Integer(inst.m) * inst.m);
  Profile x;
  for (const auto& n : inst.index.nodes) x.push_back(min(Rational(1), Rational(m2 * p[n.g1])));
  return x;
}

/// Central values (p2, p3) = ((1 + p1) / 2, 2 - p1).
inline std::pair<Rational, Rational> predict_variable_prices(const Rational& p1, long /*m*/) {
  return {(1 + p1) / 2, 2 - p1};
}

/// Central values of the edge-gadget allocations as functions of
/// p_u = p(G_{u,1}), p_v = p(G_{v,1}) and m.
struct GadgetPrediction {
  Rational first_u3;         // per A_{e,1} agent, share of G_{u,3}
  Rational first_v1;         // per A_{e,1} agent, share of G_{v,1}
  Rational second_total;     // G_{v,1} to all A_{e,2,l}
  Rational third_total;      // G_{u,1} to all A_{e,3,l}
  Rational fourth_total_v1;  // G_{v,1} to all A_{e,4,l}
  Rational fourth_total_u2;  // G_{u,2} to all A_{e,4,l}
  Rational total_u;          // x+(G_u, A_e)
  Rational total_v;          // x+(G_v, A_e)
  Rational plateau_half = rational(1, 2);
  Rational plateau_two_thirds = rational(2, 3);
};

inline void require_in_band(const Rational& p, long m, const char* name) {
  const Rational M(m);
  const Rational hi = 1 / (M * M) + 1 / rpow(M, 6);
  if (p < 0 || p > hi)
    throw ReductionError(std::string(name) + " = " + to_string(p) + " outside [0, 1/m^2 + 1/m^6]");
}

inline GadgetPrediction predict_edge_gadget(const Rational& pu, const Rational& pv, long m) {
  require_in_band(pu, m, "p_u");
  require_in_band(pv, m, "p_v");
  const Rational M(m), M2 = M * M, M3 = M2 * M;
  GadgetPrediction g;
  g.first_u3 = rational(1, 2) + (pu - pv) / 4;
  g.first_v1 = rational(1, 2) + (pv - pu) / 4;
  g.second_total = 3 * M * (1 - M2 * pv);
  g.third_total = 4 * M * (1 - M2 * pu);
  g.fourth_total_v1 = 18 * M * (rational(2, 3) + M2 * pu / 3 - M2 * pv / 2);
  g.fourth_total_u2 = 18 * M * (rational(4, 9) - 4 * M2 * pu / 9 + 2 * M2 * pv / 3);
  g.total_u = 24 * M3 + 12 * M;
  g.total_v = -6 * M3 * pu + 24 * M3 + 15 * M;
  return g;
}

// ---------------------------------------------------------------------------
// Single-agent test rig for the edge gadget at central variable prices.

enum class EdgeFamily { first, second, third, fourth };

namespace edge_env {
// Good-group order of every environment.
inline constexpr std::size_t ge = 0, u1 = 1, u2 = 2, u3 = 3, v1 = 4, dummy = 5;
}  // namespace edge_env

struct EdgeEnvironment {
  GroupedMarket market;
  PriceVector prices;
};

/// One agent group of `family` (with index l for the ell-indexed families)
/// facing p(G_e) = 2, p(G_{u,1}) = p_u, p(G_{u,2}) = (1 + p_u) / 2,
/// p(G_{u,3}) = 2 - p_u, p(G_{v,1}) = p_v and a free dummy good.
inline EdgeEnvironment build_edge_environment(const Rational& pu, const Rational& pv, long m, EdgeFamily family,
                                              long l = 1) {
  require_in_band(pu, m, "p_u");
  require_in_band(pv, m, "p_v");
  const long limit = family == EdgeFamily::fourth ? 2 * m : m;
  if (family != EdgeFamily::first && (l < 1 || l > limit))
    throw ReductionError("l = " + std::to_string(l) + " outside [1, " + std::to_string(limit) + "]");
  const Rational M(m), M3 = M * M * M;
  const std::vector<GoodGroup> goods = {{"G_e", 1}, {"G_u1", 1}, {"G_u2", 1}, {"G_u3", 1}, {"G_v1", 1}, {"dummy", 1}};
  std::map<std::string, Rational> u;
  std::string id;
  switch (family) {
    case EdgeFamily::first:
      id = "A_e1";
      u = {{"G_u3", Rational(1)}, {"G_v1", rational(1, 2)}};
      break;
    case EdgeFamily::second:
      id = "A_e2_" + std::to_string(l);
      u = {{"G_e", Rational(1)}, {"G_v1", Rational(l) / (2 * M3)}};
      break;
    case EdgeFamily::third:
      id = "A_e3_" + std::to_string(l);
      u = {{"G_e", Rational(1)}, {"G_u1", Rational(l) / (2 * M3)}};
      break;
    case EdgeFamily::fourth:
      id = "A_e4_" + std::to_string(l);
      u = {{"G_e", Rational(1)},
           {"G_v1", Rational(l) / (2 * M3)},
           {"G_u2", rational(1, 4) + 1 / (4 * M * M) + 1 / M3}};
      break;
  }
  GroupedMarket market("edge-environment", goods, {{id, 6, std::move(u)}}, true);
  const auto [p2, p3] = predict_variable_prices(pu, m);
  PriceVector prices({Rational(2), pu, p2, p3, pv, Rational(0)});
  return {std::move(market), std::move(prices)};
}

/// Exact demand of the environment's single agent.
inline Bundle edge_environment_demand(const EdgeEnvironment& env) { return optimal_bundle(env.market, 0, env.prices); }

/// Exact edge-gadget allocations at (p_u, p_v), summed per family.
struct GadgetMeasurement {
  long m = 0;
  Rational pu, pv;
  Rational first_u3, first_v1;
  std::vector<Rational> second_shares;  // per agent, G_{v,1}, l = 1..m
  std::vector<Rational> third_shares;   // per agent, G_{u,1}, l = 1..m
  std::vector<Rational> fourth_v1;      // per agent, G_{v,1}, l = 1..2m
  std::vector<Rational> fourth_u2;      // per agent, G_{u,2}, l = 1..2m
  Rational second_total, third_total, fourth_total_v1, fourth_total_u2, total_u, total_v;
};

inline GadgetMeasurement measure_edge_gadget(const Rational& pu, const Rational& pv, long m) {
  GadgetMeasurement r;
  r.m = m;
  r.pu = pu;
  r.pv = pv;
  const auto first = edge_environment_demand(build_edge_environment(pu, pv, m, EdgeFamily::first));
  r.first_u3 = first.shares[edge_env::u3];
  r.first_v1 = first.shares[edge_env::v1];
  for (long l = 1; l <= m; ++l) {
    r.second_shares.push_back(
        edge_environment_demand(build_edge_environment(pu, pv, m, EdgeFamily::second, l)).shares[edge_env::v1]);
    r.third_shares.push_back(
        edge_environment_demand(build_edge_environment(pu, pv, m, EdgeFamily::third, l)).shares[edge_env::u1]);
  }
  for (long l = 1; l <= 2 * m; ++l) {
    const auto b = edge_environment_demand(build_edge_environment(pu, pv, m, EdgeFamily::fourth, l));
    r.fourth_v1.push_back(b.shares[edge_env::v1]);
    r.fourth_u2.push_back(b.shares[edge_env::u2]);
  }
  r.second_total = r.third_total = r.fourth_total_v1 = r.fourth_total_u2 = 0;
  for (const auto& s : r.second_shares) r.second_total += 6 * s;
  for (const auto& s : r.third_shares) r.third_total += 8 * s;
  for (const auto& s : r.fourth_v1) r.fourth_total_v1 += 18 * s;
  for (const auto& s : r.fourth_u2) r.fourth_total_u2 += 18 * s;
  const Rational M3 = rpow(Rational(m), 3);
  r.total_u = 48 * M3 * r.first_u3 + r.third_total + r.fourth_total_u2;
  r.total_v = 48 * M3 * r.first_v1 + r.second_total + r.fourth_total_v1;
  return r;
}

}  // namespace hzlab

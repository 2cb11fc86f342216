#include <gtest/gtest.h>

#include <random>

#include "hzlab/ppad.hpp"

using namespace hzlab;

namespace {

Rational q(long a, long b = 1) { return rational(a, b); }

}  // namespace

TEST(BuildPpadMarket, IsolatedNodeCounts) {
  ThresholdGame g(1, {}, q(1, 10));
  auto inst = build_ppad_market(g, 2);
  EXPECT_EQ(inst.market.goods()[inst.index.nodes[0].g1].count, Integer(1024 - 6));
  EXPECT_EQ(inst.market.goods()[inst.index.dummy].count, Integer(6));
  EXPECT_EQ(inst.market.total_goods(), Integer(5120));
  EXPECT_EQ(inst.market.total_agents(), Integer(5120));
  EXPECT_TRUE(validate_market(inst.market).empty());
}

TEST(BuildPpadMarket, SingleEdgeCounts) {
  ThresholdGame g(2, {{0, 1}}, q(1, 10));
  auto inst = build_ppad_market(g, 2);
  EXPECT_EQ(inst.market.total_agents(), Integer(12772));
  EXPECT_EQ(inst.market.total_agents(), ppad_agent_count(2, 2, 1));
  EXPECT_EQ(inst.market.total_goods(), inst.market.total_agents());
  EXPECT_TRUE(validate_market(inst.market).empty());
  const auto& e = inst.index.edges[0];
  EXPECT_EQ(e.second.size(), 2u);
  EXPECT_EQ(e.third.size(), 2u);
  EXPECT_EQ(e.fourth.size(), 4u);
}

TEST(BuildPpadMarket, UtilitiesMatchConstruction) {
  ThresholdGame g(2, {{0, 1}}, q(1, 10));
  const long m = 3;
  auto inst = build_ppad_market(g, m);
  const auto& mk = inst.market;
  const auto& n0 = inst.index.nodes[0];
  EXPECT_EQ(mk.utility(n0.agents, n0.g1), q(1, 17));
  EXPECT_EQ(mk.utility(n0.agents, n0.g2), q(10, 34));
  EXPECT_EQ(mk.utility(n0.agents, n0.g3), q(1));
  const auto& e = inst.index.edges[0];
  const auto& nu = inst.index.nodes[0];
  const auto& nv = inst.index.nodes[1];
  EXPECT_EQ(mk.utility(e.first, nu.g3), q(1));
  EXPECT_EQ(mk.utility(e.first, nv.g1), q(1, 2));
  EXPECT_EQ(mk.utility(e.second[1], nv.g1), q(2, 54));
  EXPECT_EQ(mk.utility(e.third[2], nu.g1), q(3, 54));
  EXPECT_EQ(mk.utility(e.fourth[5], nv.g1), q(6, 54));
  EXPECT_EQ(mk.utility(e.fourth[5], nu.g2), q(1, 4) + q(1, 36) + q(1, 27));
  EXPECT_EQ(mk.utility(e.fourth[5], e.good), q(1));
  EXPECT_EQ(mk.agents()[e.star].count, Integer(64 * 243));
}

TEST(BuildPpadMarket, RejectsSmallMAndHighDegree) {
  ThresholdGame g(1, {}, q(1, 10));
  EXPECT_THROW(build_ppad_market(g, 1), ReductionError);
  ThresholdGame star(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}, q(1, 10));
  EXPECT_THROW(build_ppad_market(star, 2), ReductionError);
}

TEST(BuildPpadMarket, RandomGraphCountIdentities) {
  std::mt19937 rng(17);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<Edge> edges;
    std::vector<int> in(n, 0), out(n, 0);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && rng() % 2 && in[v] < 3 && out[u] < 3) {
          edges.emplace_back(u, v);
          ++in[v];
          ++out[u];
        }
    ThresholdGame g(n, edges, q(1, 10));
    for (long m : {2L, 3L}) {
      auto inst = build_ppad_market(g, m);
      EXPECT_EQ(inst.market.total_agents(), ppad_agent_count(m, n, edges.size()));
      EXPECT_EQ(inst.market.total_goods(), inst.market.total_agents());
    }
  }
}

TEST(ExtractThresholdProfile, ClampsAtOne) {
  ThresholdGame g(3, {}, q(1, 10));
  auto inst = build_ppad_market(g, 2);
  std::vector<Rational> p(inst.market.num_goods(), Rational(0));
  p[inst.index.nodes[1].g1] = q(1, 4);
  p[inst.index.nodes[2].g1] = q(1, 2);
  auto x = extract_threshold_profile(inst, PriceVector(p));
  EXPECT_EQ(x, (Profile{q(0), q(1), q(1)}));
  p[inst.index.nodes[0].g1] = q(1, 8);
  EXPECT_EQ(extract_threshold_profile(inst, PriceVector(p))[0], q(1, 2));
}

TEST(PredictVariablePrices, CentralValues) {
  EXPECT_EQ(predict_variable_prices(q(0), 4), std::make_pair(q(1, 2), q(2)));
  EXPECT_EQ(predict_variable_prices(q(1, 16), 4), std::make_pair(q(17, 32), q(31, 16)));
  EXPECT_EQ(predict_variable_prices(q(1, 32), 4), std::make_pair(q(33, 64), q(63, 32)));
}

TEST(PredictEdgeGadget, ZeroPrices) {
  const long m = 4;
  auto g = predict_edge_gadget(q(0), q(0), m);
  EXPECT_EQ(g.first_u3, q(1, 2));
  EXPECT_EQ(g.first_v1, q(1, 2));
  EXPECT_EQ(g.total_u, q(24 * 64 + 48));
  EXPECT_EQ(g.total_v, q(24 * 64 + 60));
}

TEST(PredictEdgeGadget, ComponentsSumToTotals) {
  std::mt19937 rng(1);
  for (long m : {2L, 4L, 8L}) {
    const Rational M(m), band = 1 / (M * M);
    for (int t = 0; t < 10; ++t) {
      const Rational pu = band * rational(rng() % 101, 100), pv = band * rational(rng() % 101, 100);
      auto g = predict_edge_gadget(pu, pv, m);
      const Rational m3 = M * M * M;
      EXPECT_EQ(48 * m3 * g.first_u3 + g.third_total + g.fourth_total_u2, g.total_u);
      EXPECT_EQ(48 * m3 * g.first_v1 + g.second_total + g.fourth_total_v1, g.total_v);
    }
  }
  EXPECT_EQ(predict_edge_gadget(q(1, 16), q(0), 4).total_v, q(24 * 64 + 60 - 24));
}

TEST(PredictEdgeGadget, SymmetricPricesGiveEvenSplit) {
  auto g = predict_edge_gadget(q(1, 40), q(1, 40), 4);
  EXPECT_EQ(g.first_u3, q(1, 2));
  EXPECT_EQ(g.first_v1, q(1, 2));
}

TEST(PredictEdgeGadget, RejectsOutOfBand) {
  EXPECT_THROW(predict_edge_gadget(q(-1, 100), q(0), 4), ReductionError);
  EXPECT_THROW(predict_edge_gadget(q(0), q(1, 10), 4), ReductionError);
  EXPECT_NO_THROW(predict_edge_gadget(q(1, 16) + q(1, 4096), q(0), 4));
}

TEST(EdgeEnvironment, FirstFamilyAtZeroPrices) {
  auto env = build_edge_environment(q(0), q(0), 4, EdgeFamily::first);
  EXPECT_TRUE(validate_market(env.market).empty());
  auto b = edge_environment_demand(env);
  EXPECT_EQ(b.shares[edge_env::u3], q(1, 2));
  EXPECT_EQ(b.shares[edge_env::v1], q(1, 2));
  auto d = dual_optimum(env.market, 0, env.prices);
  EXPECT_EQ(d.alpha, q(1, 4));
  EXPECT_EQ(d.mu, q(1, 2));
}

TEST(EdgeEnvironment, FirstFamilyExactShare) {
  const Rational pu = q(1, 50), pv = q(1, 70);
  auto b = edge_environment_demand(build_edge_environment(pu, pv, 4, EdgeFamily::first));
  EXPECT_EQ(b.shares[edge_env::v1], (1 - pu) / (2 - pu - pv));
}

TEST(EdgeEnvironment, SecondFamilyPlateaus) {
  const long m = 8;
  const Rational M3(512), M4(4096);
  const Rational pv = q(1, 100);
  for (long l = 1; l <= m; ++l) {
    auto b = edge_environment_demand(build_edge_environment(q(0), pv, m, EdgeFamily::second, l));
    if (Rational(l) / M3 >= pv + 1 / M4) {
      EXPECT_EQ(b.shares[edge_env::v1], 1 / (2 - pv));
    }
    if (Rational(l) / M3 <= pv - 1 / M4) {
      EXPECT_EQ(b.shares[edge_env::v1], 0);
    }
  }
}

TEST(EdgeEnvironment, SuboptimalGapAboveThreshold) {
  const long m = 8;
  const Rational M3(512), M4(4096);
  // p_v sits exactly 1/m^4 above l/m^3 for l = 4.
  const long l = 4;
  const Rational pv = Rational(l) / M3 + 1 / M4;
  auto env = build_edge_environment(q(0), pv, m, EdgeFamily::second, l);
  auto gaps = suboptimality(env.market, 0, env.prices).gaps;
  EXPECT_GE(gaps[edge_env::v1], 1 / (2 * M4));
}

TEST(EdgeEnvironment, RejectsBadIndex) {
  EXPECT_THROW(build_edge_environment(q(0), q(0), 4, EdgeFamily::second, 5), ReductionError);
  EXPECT_NO_THROW(build_edge_environment(q(0), q(0), 4, EdgeFamily::fourth, 8));
}

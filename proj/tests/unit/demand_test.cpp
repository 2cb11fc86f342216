#include <gtest/gtest.h>

#include <random>

#include "hzlab/demand.hpp"
#include "support/oracles.hpp"
#include "support/sample_markets.hpp"

using namespace hzlab;
using oracles::brute_force_value;
using samples::q;

namespace {

GroupedMarket single_agent(std::vector<Rational> utilities) {
  std::vector<GoodGroup> goods;
  std::map<std::string, Rational> u;
  for (std::size_t g = 0; g < utilities.size(); ++g) {
    goods.push_back({"g" + std::to_string(g), 1});
    if (utilities[g] != 0) u["g" + std::to_string(g)] = utilities[g];
  }
  return GroupedMarket("single", goods, {{"a", static_cast<long>(utilities.size()), u}});
}

}  // namespace

TEST(OptimalValue, BudgetLimitedFavourite) {
  auto m = single_agent({q(1), q(0)});
  EXPECT_EQ(optimal_value(m, 0, samples::prices({q(2), q(0)})), q(1, 2));
  EXPECT_EQ(optimal_value(m, 0, samples::prices({q(0), q(0)})), q(1));
}

TEST(OptimalValue, DisconnectedMarketAgent) {
  auto m = samples::disconnected();
  EXPECT_EQ(optimal_value(m, 0, samples::prices({q(0), q(8, 5), q(4, 5)})), q(13, 16));
}

TEST(OptimalValue, InfeasibleWhenEveryPriceExceedsBudget) {
  auto m = single_agent({q(1), q(1, 2)});
  EXPECT_THROW(optimal_value(m, 0, samples::prices({q(3, 2), q(2)})), InfeasibleDemandError);
  EXPECT_NO_THROW(optimal_value(m, 0, samples::prices({q(1), q(2)})));
}

TEST(OptimalBundle, SplitsAcrossBudgetLine) {
  auto m = single_agent({q(1), q(1, 2), q(0)});
  auto b = optimal_bundle(m, 0, samples::prices({q(2), q(0), q(0)}));
  EXPECT_EQ(b.shares, (std::vector<Rational>{q(1, 2), q(1, 2), q(0)}));
  EXPECT_EQ(b.value, q(3, 4));
  EXPECT_EQ(b.cost, q(1));
}

TEST(OptimalBundle, ExpensiveFavouriteWithFreeDummy) {
  auto m = single_agent({q(1), q(0)});
  auto b = optimal_bundle(m, 0, samples::prices({q(3), q(0)}));
  EXPECT_EQ(b.shares, (std::vector<Rational>{q(1, 3), q(2, 3)}));
  EXPECT_EQ(b.value, q(1, 3));
}

TEST(OptimalBundle, ZeroUtilitiesPickFirstFreeGood) {
  auto m = single_agent({q(0), q(0), q(0)});
  auto b = optimal_bundle(m, 0, samples::prices({q(2), q(0), q(0)}));
  EXPECT_EQ(b.shares, (std::vector<Rational>{q(0), q(1), q(0)}));
  EXPECT_EQ(b.value, q(0));
}

TEST(OptimalBundle, MinCostTieBreak) {
  // Goods 0 and 1 have the same utility; 1 is cheaper.
  auto m = single_agent({q(1), q(1), q(0)});
  auto p = samples::prices({q(1, 2), q(0), q(0)});
  auto lex = optimal_bundle(m, 0, p, TieBreak::lexicographic);
  auto cheap = optimal_bundle(m, 0, p, TieBreak::min_cost);
  EXPECT_EQ(lex.value, cheap.value);
  EXPECT_EQ(lex.shares[0], q(1));
  EXPECT_EQ(cheap.shares[1], q(1));
  EXPECT_EQ(cheap.cost, q(0));
}

TEST(DualOptimum, EdgeAgentAtZeroPrices) {
  auto m = single_agent({q(1), q(1, 2), q(0)});
  auto d = dual_optimum(m, 0, samples::prices({q(2), q(0), q(0)}));
  EXPECT_EQ(d.alpha, q(1, 4));
  EXPECT_EQ(d.mu, q(1, 2));
}

TEST(DualOptimum, FreeFavourite) {
  auto m = single_agent({q(1)});
  auto d = dual_optimum(m, 0, samples::prices({q(0)}));
  EXPECT_EQ(d.alpha, q(0));
  EXPECT_EQ(d.mu, q(1));
}

TEST(DualOptimum, ZeroUtilities) {
  auto m = single_agent({q(0), q(0)});
  auto d = dual_optimum(m, 0, samples::prices({q(1, 2), q(0)}));
  EXPECT_EQ(d.alpha, q(0));
  EXPECT_EQ(d.mu, q(0));
}

TEST(Suboptimality, SupportHasZeroGapAndFreeZeroGoodHasGapMu) {
  auto m = single_agent({q(1), q(1, 2), q(0)});
  auto p = samples::prices({q(2), q(0), q(0)});
  auto r = suboptimality(m, 0, p);
  EXPECT_EQ(r.gaps[0], q(0));
  EXPECT_EQ(r.gaps[1], q(0));
  EXPECT_EQ(r.gaps[2], r.certificate.mu);
}

TEST(DemandProperties, RandomMarketsAgreeAcrossOracles) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> goods_dist(1, 6);
  std::uniform_int_distribution<long> un(0, 12), pn(0, 30), den(1, 12);
  for (int t = 0; t < 300; ++t) {
    const int G = goods_dist(rng);
    std::vector<Rational> u, p;
    for (int g = 0; g < G; ++g) {
      long d = den(rng);
      u.push_back(rational(std::min(un(rng), d), d));
      p.push_back(rational(pn(rng), den(rng)));
    }
    p[std::uniform_int_distribution<int>(0, G - 1)(rng)] = rational(std::uniform_int_distribution<long>(0, 4)(rng), 4);
    auto m = single_agent(u);
    PriceVector pv(p);
    auto b = optimal_bundle(m, 0, pv);
    auto d = dual_optimum(m, 0, pv);
    Rational mass = 0, cost = 0;
    for (int g = 0; g < G; ++g) {
      EXPECT_GE(b.shares[g], 0);
      mass += b.shares[g];
      cost += b.shares[g] * p[g];
    }
    EXPECT_EQ(mass, 1);
    EXPECT_LE(cost, 1);
    EXPECT_EQ(b.value, d.value());
    EXPECT_EQ(b.value, brute_force_value(u, p));
    EXPECT_EQ(b.value, lp_optimal_value(m, 0, pv));
    EXPECT_GE(d.alpha, 0);
    auto gaps = suboptimality(m, 0, pv).gaps;
    for (int g = 0; g < G; ++g) {
      EXPECT_GE(gaps[g], 0);
      if (b.shares[g] > 0) {
        EXPECT_EQ(gaps[g], 0);
      }
    }
    // Lowering a price never hurts.
    for (int g = 0; g < G; ++g) {
      auto lower = p;
      lower[g] = lower[g] / 2;
      EXPECT_GE(optimal_value(m, 0, PriceVector(lower)), b.value);
    }
  }
}

TEST(DemandKernels, DoubleMatchesRational) {
  std::vector<Rational> u{q(1), q(1, 2), q(0), q(3, 4)};
  std::vector<Rational> p{q(2), q(1, 7), q(0), q(9, 8)};
  std::vector<double> ud, pd;
  for (auto& x : u) ud.push_back(x.get_d());
  for (auto& x : p) pd.push_back(x.get_d());
  auto exact = best_vertex<Rational>(u, p);
  auto approx = best_vertex<double>(ud, pd);
  EXPECT_NEAR(exact.value.get_d(), approx.value, 1e-12);
  auto de = best_dual<Rational>(u, p);
  auto dd = best_dual<double>(ud, pd);
  EXPECT_NEAR(de.alpha.get_d(), dd.alpha, 1e-12);
  EXPECT_NEAR(de.mu.get_d(), dd.mu, 1e-12);
}

TEST(BasicFacts, HoldAtDisconnectedEquilibria) {
  auto m = samples::disconnected();
  for (const auto& e : samples::disconnected_equilibria()) {
    auto r = check_basic_facts(m, e.x, e.p, 0);
    EXPECT_TRUE(r.all_hold());
    for (const auto& f : r.failures()) ADD_FAILURE() << f.item << " " << f.subject << ": " << f.detail;
  }
}

TEST(BasicFacts, FlagsExcessivePriceMass) {
  auto m = samples::disconnected();
  auto e = samples::disconnected_equilibria()[0];
  auto r = check_basic_facts(m, e.x, samples::prices({q(0), q(5), q(0)}), 0);
  bool flagged = false;
  for (const auto& f : r.failures()) flagged |= f.item == "a";
  EXPECT_TRUE(flagged);
}

TEST(BasicFacts, RequiresUnitMaxFlag) {
  GroupedMarket m("s", {{"g", 1}}, {{"a", 1, {{"g", q(1)}}}});
  auto r = check_basic_facts(m, samples::allocation({{q(1)}}), samples::prices({q(0)}), 0);
  ASSERT_FALSE(r.all_hold());
  EXPECT_EQ(r.failures()[0].item, "precondition");
}

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hzlab/threshold_game.hpp"

using namespace hzlab;

namespace {

Rational q(long a, long b = 1) { return rational(a, b); }

ThresholdGame two_cycle(const Rational& kappa = q(1, 10)) { return ThresholdGame(2, {{0, 1}, {1, 0}}, kappa); }

}  // namespace

TEST(VerifyProfile, IsolatedNodeMustPlayHigh) {
  ThresholdGame g(1, {}, q(1, 10));
  EXPECT_TRUE(verify_profile(g, {q(1)}).pass());
  auto v = verify_profile(g, {q(1, 2)});
  ASSERT_FALSE(v.pass());
  EXPECT_EQ(v.violations[0].subject, "0");
  EXPECT_EQ(v.violations[0].magnitude, q(2, 5));
}

TEST(VerifyProfile, TwoCycleCornerAndMiddle) {
  auto g = two_cycle();
  EXPECT_TRUE(verify_profile(g, {q(1), q(0)}).pass());
  EXPECT_TRUE(verify_profile(g, {q(1, 2), q(1, 2)}).pass());
  EXPECT_FALSE(verify_profile(g, {q(1), q(1)}).pass());
}

TEST(VerifyProfile, BoundaryIsUnconstrained) {
  auto g = two_cycle(q(1, 10));
  // Neighbour sum exactly 1/2 + kappa and 1/2 - kappa.
  EXPECT_TRUE(verify_profile(g, {q(3, 5), q(2, 5)}).pass());
}

TEST(VerifyProfile, RejectsBadProfiles) {
  auto g = two_cycle();
  EXPECT_THROW(verify_profile(g, {q(1)}), GameError);
  EXPECT_THROW(verify_profile(g, {q(2), q(0)}), GameError);
}

TEST(ThresholdGameModel, ValidatesStructure) {
  EXPECT_THROW(ThresholdGame(2, {{0, 1}, {0, 1}}, q(1, 10)), GameError);
  EXPECT_THROW(ThresholdGame(2, {{0, 2}}, q(1, 10)), GameError);
  EXPECT_THROW(ThresholdGame(2, {}, q(1, 2)), GameError);
  EXPECT_THROW(ThresholdGame(2, {}, q(0)), GameError);
  EXPECT_THROW(ThresholdGame(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}, q(1, 10), true), GameError);
  EXPECT_NO_THROW(ThresholdGame(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}, q(1, 10), false));
}

TEST(SolveBruteForce, SmallGames) {
  ThresholdGame iso(1, {}, q(1, 10));
  EXPECT_EQ(solve_brute_force(iso, q(1, 2)), Profile{q(1)});
  EXPECT_EQ(solve_brute_force(iso, q(1, 10)), Profile{q(9, 10)});
  auto cyc = two_cycle();
  auto x = solve_brute_force(cyc, q(1, 10));
  EXPECT_TRUE(verify_profile(cyc, x).pass());
  ThresholdGame tri(3, {{0, 1}, {1, 2}, {2, 0}}, q(1, 10));
  EXPECT_TRUE(verify_profile(tri, solve_brute_force(tri, q(1, 10))).pass());
}

TEST(SolveBruteForce, RejectsBadGridAndLargeGames) {
  auto g = two_cycle();
  EXPECT_THROW(solve_brute_force(g, q(2, 7)), GameError);
  ThresholdGame big(9, {}, q(1, 10));
  EXPECT_THROW(solve_brute_force(big, q(1, 2)), GameError);
}

TEST(SolveBruteForce, ReportsMissingGridSolution) {
  // Odd cycle with grid {0, 1}: no profile in {0,1}^3 is consistent.
  ThresholdGame tri(3, {{0, 1}, {1, 2}, {2, 0}}, q(1, 10));
  EXPECT_THROW(solve_brute_force(tri, q(1)), NoGridSolutionError);
}

TEST(ThresholdProperties, RandomGamesSolveAndKappaMonotone) {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && rng() % 3 == 0) edges.emplace_back(u, v);
    ThresholdGame g(n, edges, q(1, 10));
    auto x = solve_brute_force(g, q(1, 10));
    EXPECT_TRUE(verify_profile(g, x).pass());
    // Random profile: passing at kappa implies passing at larger kappa.
    Profile y;
    for (std::size_t v = 0; v < n; ++v) y.push_back(q(static_cast<long>(rng() % 11), 10));
    for (long k = 1; k < 4; ++k) {
      ThresholdGame lo(n, edges, q(k, 10)), hi(n, edges, q(k + 1, 10));
      if (verify_profile(lo, y).pass()) {
        EXPECT_TRUE(verify_profile(hi, y).pass());
      }
    }
  }
}

TEST(ThresholdGameText, RoundTrip) {
  std::istringstream in("# cycle\n3 1/10\n0 1\n1 2\n\n2 0\n");
  auto g = parse_threshold_game(in);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.edges().size(), 3u);
  std::ostringstream out;
  write_threshold_game(out, g);
  EXPECT_EQ(out.str(), "3 1/10\n0 1\n1 2\n2 0\n");
}

TEST(ThresholdGameText, ReportsLineOfError) {
  std::istringstream in("2 1/10\n0 x\n");
  try {
    parse_threshold_game(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream bad_kappa("2 0.1\n");
  EXPECT_THROW(parse_threshold_game(bad_kappa), ParseError);
}

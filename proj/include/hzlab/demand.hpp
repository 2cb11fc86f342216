#pragma once

// Agent demand at fixed prices. An agent buys one unit of mass with one
// unit of money:
//
//   maximize  sum_j u_j x_j   s.t.  sum_j x_j = 1,  sum_j p_j x_j <= 1,  x >= 0
//   minimize  alpha + mu      s.t.  alpha >= 0,  alpha p_j + mu >= u_j
//
// With only two non-sign constraints every optimal vertex has at most two
// goods in its support, and every dual vertex is tight on at most two
// constraints, so both sides are solved by enumeration. The LP engine is
// kept as an independent cross-check.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hzlab/lp.hpp"
#include "hzlab/market.hpp"
#include "hzlab/rational.hpp"

namespace hzlab {

class InfeasibleDemandError : public std::runtime_error {
 public:
  explicit InfeasibleDemandError(const std::string& what) : std::runtime_error(what) {}
};

enum class TieBreak { lexicographic, min_cost };

template <class Scalar>
struct VertexBundle {
  std::size_t first = 0;
  std::size_t second = 0;  // equals `first` for a single-good bundle
  Scalar first_share{};    // `second` receives 1 - first_share
  Scalar value{};
  Scalar cost{};

  bool single() const { return first == second; }
};

template <class Scalar>
struct DualPair {
  Scalar alpha{};
  Scalar mu{};
};

namespace detail {

template <class Scalar>
void require_affordable(std::span<const Scalar> prices) {
  using T = ScalarTraits<Scalar>;
  if (prices.empty()) throw InfeasibleDemandError("no goods");
  for (const auto& p : prices)
    if (!T::less(Scalar(1), p)) return;
  throw InfeasibleDemandError("every price exceeds the unit budget");
}

}  // namespace detail

/// Best vertex bundle. Single goods are tried first in index order, then
/// pairs {j,k} in lexicographic order; with
/// TieBreak::lexicographic the first optimal candidate wins, with
/// TieBreak::min_cost the cheapest optimal one (then lexicographic).
template <class Scalar>
VertexBundle<Scalar> best_vertex(std::span<const Scalar> utilities, std::span<const Scalar> prices,
                                 TieBreak tie = TieBreak::lexicographic) {
  using T = ScalarTraits<Scalar>;
  detail::require_affordable(prices);
  const std::size_t n = prices.size();
  std::optional<VertexBundle<Scalar>> best;
  auto offer = [&](VertexBundle<Scalar>&& c) {
    if (!best || T::less(best->value, c.value)) {
      best = std::move(c);
    } else if (tie == TieBreak::min_cost && T::equal(best->value, c.value) && T::less(c.cost, best->cost)) {
      best = std::move(c);
    }
  };
  const Scalar one(1);
  for (std::size_t j = 0; j < n; ++j)
    if (!T::less(one, prices[j])) offer({j, j, one, utilities[j], prices[j]});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const Scalar dj = prices[j] - one;
      const Scalar dk = prices[k] - one;
      // The budget line crosses the segment [j,k] in its interior only
      // when one price is above 1 and the other below.
      const bool straddle = (T::is_positive(dj) && T::is_negative(dk)) || (T::is_negative(dj) && T::is_positive(dk));
      if (!straddle) continue;
      Scalar share = (one - prices[k]) / (prices[j] - prices[k]);
      Scalar value = share * utilities[j] + (one - share) * utilities[k];
      offer({j, k, share, value, one});
    }
  }
  return *best;
}

/// Optimal dual vertex; among optimal vertices the one with least alpha.
template <class Scalar>
DualPair<Scalar> best_dual(std::span<const Scalar> utilities, std::span<const Scalar> prices) {
  using T = ScalarTraits<Scalar>;
  detail::require_affordable(prices);
  const std::size_t n = prices.size();
  DualPair<Scalar> best{Scalar(0), utilities[0]};
  for (std::size_t j = 1; j < n; ++j)
    if (T::less(best.mu, utilities[j])) best.mu = utilities[j];
  Scalar best_obj = best.alpha + best.mu;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (T::equal(prices[j], prices[k])) continue;
      Scalar alpha = (utilities[j] - utilities[k]) / (prices[j] - prices[k]);
      if (T::is_negative(alpha)) continue;
      Scalar mu = utilities[j] - alpha * prices[j];
      Scalar obj = alpha + mu;
      if (!T::less(obj, best_obj) && !(T::equal(obj, best_obj) && T::less(alpha, best.alpha))) continue;
      bool feasible = true;
      for (std::size_t l = 0; l < n && feasible; ++l)
        feasible = !T::less(Scalar(alpha * prices[l] + mu), utilities[l]);
      if (!feasible) continue;
      best = {alpha, mu};
      best_obj = obj;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Market-level API (exact).

struct DualCertificate {
  Rational alpha;
  Rational mu;

  Rational value() const { return alpha + mu; }
  friend bool operator==(const DualCertificate&, const DualCertificate&) = default;
};

struct SuboptimalityReport {
  DualCertificate certificate;
  std::vector<Rational> gaps;  // alpha p_j + mu - u_j per good group
};

inline Bundle optimal_bundle(const GroupedMarket& m, std::size_t agent, const PriceVector& p,
                             TieBreak tie = TieBreak::lexicographic) {
  check_shape(m, p);
  const auto u = m.utility_row(agent);
  const auto v = best_vertex<Rational>(u, p.values(), tie);
  Bundle b;
  b.shares.assign(m.num_goods(), Rational(0));
  b.shares[v.first] += v.first_share;
  b.shares[v.second] += 1 - v.first_share;
  b.value = v.value;
  b.cost = v.single() ? p[v.first] : v.cost;
  return b;
}

inline Rational optimal_value(const GroupedMarket& m, std::size_t agent, const PriceVector& p) {
  return optimal_bundle(m, agent, p).value;
}

inline DualCertificate dual_optimum(const GroupedMarket& m, std::size_t agent, const PriceVector& p) {
  check_shape(m, p);
  const auto u = m.utility_row(agent);
  const auto d = best_dual<Rational>(u, p.values());
  return {d.alpha, d.mu};
}

inline SuboptimalityReport suboptimality(const GroupedMarket& m, std::size_t agent, const PriceVector& p) {
  SuboptimalityReport r;
  r.certificate = dual_optimum(m, agent, p);
  for (std::size_t g = 0; g < m.num_goods(); ++g)
    r.gaps.push_back(r.certificate.alpha * p[g] + r.certificate.mu - m.utility(agent, g));
  return r;
}

/// The agent's bundle LP in the engine's minimization form.
inline LinearProgram<Rational> agent_primal_lp(const GroupedMarket& m, std::size_t agent, const PriceVector& p) {
  check_shape(m, p);
  const std::size_t n = m.num_goods();
  LinearProgram<Rational> lp;
  for (std::size_t g = 0; g < n; ++g) lp.objective.push_back(-m.utility(agent, g));
  lp.constraints.push_back({std::vector<Rational>(n, Rational(1)), Relation::equal, Rational(1)});
  lp.constraints.push_back({p.values(), Relation::less_equal, Rational(1)});
  return lp;
}

/// Optimal value through the simplex engine (cross-validation route).
inline Rational lp_optimal_value(const GroupedMarket& m, std::size_t agent, const PriceVector& p) {
  const auto out = solve_lp(agent_primal_lp(m, agent, p));
  if (out.status != LpStatus::optimal) throw InfeasibleDemandError("agent LP is " + std::string(out.status == LpStatus::infeasible ? "infeasible" : "unbounded"));
  return -out.objective_value;
}

// ---------------------------------------------------------------------------
// Structural facts every approximate equilibrium satisfies when each agent's
// favourite good has utility 1 and prices are normalized.

struct FactCheck {
  std::string item;     // "a".."e"
  std::string subject;  // agent group id or "market"
  bool holds = true;
  std::string detail;
};

struct BasicFactsReport {
  std::vector<FactCheck> checks;

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
  std::vector<FactCheck> failures() const {
    std::vector<FactCheck> out;
    for (const auto& c : checks)
      if (!c.holds) out.push_back(c);
    return out;
  }
};

inline BasicFactsReport check_basic_facts(const GroupedMarket& m, const Allocation& x, const PriceVector& p,
                                          const Rational& eps,
                                          const std::vector<Rational>& deltas = {rational(1, 10)}) {
  check_shape(m, x);
  check_shape(m, p);
  BasicFactsReport r;
  if (!m.max_utility_one()) {
    r.checks.push_back({"precondition", "market", false, "market does not declare max utility one"});
    return r;
  }
  const Rational n(m.total_agents());
  Rational price_mass = 0;
  for (std::size_t g = 0; g < m.num_goods(); ++g) price_mass += Rational(m.goods()[g].count) * p[g];
  r.checks.push_back({"a", "market", price_mass <= 2 * n,
                      "sum of prices " + to_string(price_mass) + " vs 2n = " + to_string(Rational(2 * n))});

  const Rational nine_tenths = rational(9, 10);
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    const std::string& id = m.agents()[a].id;
    const auto sub = suboptimality(m, a, p);
    const auto& cert = sub.certificate;
    r.checks.push_back({"b", id, cert.mu >= 0 && cert.alpha <= 1,
                        "alpha* = " + to_string(cert.alpha) + ", mu* = " + to_string(cert.mu)});

    const Rational value = cert.value();
    const Rational spend = bundle_cost(p, x, a);
    if (value <= nine_tenths) {
      const Rational alpha_floor = 1 / (20 * n);
      const Rational spend_floor = 1 - 20 * n * eps;
      r.checks.push_back({"c", id, cert.alpha >= alpha_floor && spend >= spend_floor,
                          "alpha* = " + to_string(cert.alpha) + " (floor " + to_string(alpha_floor) +
                              "), spend = " + to_string(spend) + " (floor " + to_string(spend_floor) + ")"});
      Rational useful = 0;
      for (std::size_t g = 0; g < m.num_goods(); ++g)
        if (m.utility(a, g) > 0) useful += p[g] * x.at(a, g);
      const Rational lo = 1 - 20 * n * eps - 1 / (n * n);
      r.checks.push_back({"e", id, lo <= useful && useful <= 1 + eps,
                          "spend on positive-utility goods = " + to_string(useful) + " in [" + to_string(lo) +
                              ", " + to_string(Rational(1 + eps)) + "]"});
    }
    for (const auto& delta : deltas) {
      Rational mass = 0;
      for (std::size_t g = 0; g < m.num_goods(); ++g)
        if (sub.gaps[g] >= delta) mass += x.at(a, g);
      const Rational bound = 2 * eps / delta;
      r.checks.push_back({"d", id, mass <= bound,
                          "mass on " + to_string(delta) + "-suboptimal goods = " + to_string(mass) + " (bound " +
                              to_string(bound) + ")"});
    }
  }
  return r;
}

}  // namespace hzlab

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hzlab/demand.hpp"
#include "hzlab/lp.hpp"
#include "hzlab/market.hpp"
#include "hzlab/rational.hpp"
#include "hzlab/verdict.hpp"

namespace hzlab {

class NormalizationError : public std::runtime_error {
 public:
  explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};

class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

namespace condition {
inline constexpr const char* clear_goods = "clear_goods";
inline constexpr const char* unit_mass = "unit_mass";
inline constexpr const char* budget = "budget";
inline constexpr const char* optimality = "optimality";
inline constexpr const char* normalized = "normalized";
}  // namespace condition

namespace detail {

struct Slack {
  Rational clearing;  // per-unit tolerance on each good's total
  Rational budget;
  Rational optimality;
};

inline Verdict verify_with(const GroupedMarket& m, const Allocation& x, const PriceVector& p, const Slack& slack) {
  check_shape(m, x);
  check_shape(m, p);
  for (std::size_t a = 0; a < m.num_agents(); ++a)
    for (std::size_t g = 0; g < m.num_goods(); ++g)
      if (x.at(a, g) < 0)
        throw MarketError("negative allocation for " + m.agents()[a].id + " -> " + m.goods()[g].id);

  Verdict v;
  for (std::size_t g = 0; g < m.num_goods(); ++g) {
    Rational sold = 0;
    for (std::size_t a = 0; a < m.num_agents(); ++a) sold += Rational(m.agents()[a].count) * x.at(a, g);
    const Rational per_unit = sold / Rational(m.goods()[g].count);
    const Rational gap = per_unit - 1;
    if (abs(gap) > slack.clearing) v.violations.push_back({condition::clear_goods, m.goods()[g].id, gap});
  }
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    const std::string& id = m.agents()[a].id;
    Rational mass = 0;
    for (std::size_t g = 0; g < m.num_goods(); ++g) mass += x.at(a, g);
    if (mass != 1) v.violations.push_back({condition::unit_mass, id, Rational(mass - 1)});
    const Rational cost = bundle_cost(p, x, a);
    if (cost > 1 + slack.budget) v.violations.push_back({condition::budget, id, Rational(cost - 1)});
    Rational best;
    try {
      best = optimal_value(m, a, p);
    } catch (const InfeasibleDemandError&) {
      continue;  // no affordable bundle; the budget check already fails
    }
    const Rational value = bundle_value(m, x, a);
    if (value < best - slack.optimality) v.violations.push_back({condition::optimality, id, Rational(best - value)});
  }
  return v;
}

inline void require_normalized(const PriceVector& p) {
  if (!p.normalized())
    throw NormalizationError("approximate equilibria need normalized prices (min price " + to_string(p.min()) +
                             ")");
}

}  // namespace detail

/// Exact equilibrium: clearing, unit mass, budget 1 and value-optimal
/// bundles, all with zero tolerance.
inline Verdict verify_exact(const GroupedMarket& m, const Allocation& x, const PriceVector& p) {
  return detail::verify_with(m, x, p, {0, 0, 0});
}

/// eps-approximate equilibrium: exact clearing and unit mass, cost at most
/// 1 + eps, value within eps of the optimum. Prices must be normalized.
inline Verdict verify_approx(const GroupedMarket& m, const Allocation& x, const PriceVector& p,
                             const Rational& eps) {
  detail::require_normalized(p);
  return detail::verify_with(m, x, p, {0, eps, eps});
}

/// As verify_approx, with each good's per-unit clearing allowed to miss by eps.
inline Verdict verify_relaxed(const GroupedMarket& m, const Allocation& x, const PriceVector& p,
                              const Rational& eps) {
  detail::require_normalized(p);
  return detail::verify_with(m, x, p, {eps, eps, eps});
}

// ---------------------------------------------------------------------------
// Bundle feasibility: is there a group-uniform allocation clearing the market
// at prices p in which every agent's bundle is eps-optimal and eps-affordable?

/// Dense numeric view of a market for the templated kernels.
template <class Scalar>
struct MarketArrays {
  std::size_t agents = 0;
  std::size_t goods = 0;
  std::vector<Scalar> utility;            // agents x goods
  std::vector<Scalar> agent_per_good;     // agents x goods: count_a / count_g
  std::vector<Rational> agent_counts;
  std::vector<Rational> good_counts;

  explicit MarketArrays(const GroupedMarket& m) : agents(m.num_agents()), goods(m.num_goods()) {
    for (const auto& a : m.agents()) agent_counts.emplace_back(a.count);
    for (const auto& g : m.goods()) good_counts.emplace_back(g.count);
    for (std::size_t a = 0; a < agents; ++a)
      for (std::size_t g = 0; g < goods; ++g) {
        utility.push_back(ScalarTraits<Scalar>::from(m.utility(a, g)));
        agent_per_good.push_back(ScalarTraits<Scalar>::from(agent_counts[a] / good_counts[g]));
      }
  }

  std::span<const Scalar> utility_row(std::size_t a) const {
    return {utility.data() + a * goods, goods};
  }
};

template <class Scalar>
LinearProgram<Scalar> bundle_feasibility_lp(const MarketArrays<Scalar>& mk, std::span<const Scalar> prices,
                                            const Scalar& eps) {
  const std::size_t A = mk.agents, G = mk.goods, n = A * G;
  LinearProgram<Scalar> lp;
  lp.objective.assign(n, Scalar(0));
  for (std::size_t a = 0; a < A; ++a) {
    std::vector<Scalar> row(n, Scalar(0));
    for (std::size_t g = 0; g < G; ++g) row[a * G + g] = 1;
    lp.constraints.push_back({std::move(row), Relation::equal, Scalar(1)});
  }
  for (std::size_t g = 0; g < G; ++g) {
    std::vector<Scalar> row(n, Scalar(0));
    for (std::size_t a = 0; a < A; ++a) row[a * G + g] = mk.agent_per_good[a * G + g];
    lp.constraints.push_back({std::move(row), Relation::equal, Scalar(1)});
  }
  for (std::size_t a = 0; a < A; ++a) {
    std::vector<Scalar> cost(n, Scalar(0)), value(n, Scalar(0));
    for (std::size_t g = 0; g < G; ++g) {
      cost[a * G + g] = prices[g];
      value[a * G + g] = mk.utility[a * G + g];
    }
    const auto best = best_vertex<Scalar>(mk.utility_row(a), prices).value;
    lp.constraints.push_back({std::move(cost), Relation::less_equal, Scalar(Scalar(1) + eps)});
    lp.constraints.push_back({std::move(value), Relation::greater_equal, Scalar(best - eps)});
  }
  return lp;
}

inline std::optional<Allocation> bundle_feasibility(const GroupedMarket& m, const PriceVector& p,
                                                    const Rational& eps) {
  check_shape(m, p);
  detail::require_normalized(p);
  const MarketArrays<Rational> mk(m);
  const auto res = check_feasible(bundle_feasibility_lp<Rational>(mk, p.values(), eps));
  if (!res.feasible) return std::nullopt;
  Allocation x(m.num_agents(), m.num_goods());
  for (std::size_t a = 0; a < m.num_agents(); ++a)
    for (std::size_t g = 0; g < m.num_goods(); ++g) x.at(a, g) = res.witness[a * m.num_goods() + g];
  return x;
}

// ---------------------------------------------------------------------------
// Grid search for small markets.

struct EquilibriumCluster {
  PriceVector representative;
  std::vector<PriceVector> members;  // lexicographic order
  Rational diameter;                 // max-norm
};

struct FinderOptions {
  Rational grid = rational(1, 50);
  Rational eps = 0;
  int refine_steps = 30;
  long max_denominator = 10000;
  unsigned threads = 0;  // 0: HZLAB_THREADS or 1
  std::size_t max_goods = 6;
};

inline unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HZLAB_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

namespace detail {

inline bool lex_less(const PriceVector& a, const PriceVector& b) {
  return std::lexicographical_compare(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
}

// Floating-point screen: a necessary suboptimal-mass test followed by the
// bundle-feasibility LP in double precision.
class FloatScreen {
 public:
  FloatScreen(const GroupedMarket& m, const Rational& eps) : mk_(m), eps_(eps.get_d()) {
    for (std::size_t a = 0; a < mk_.agents; ++a)
      for (std::size_t g = 0; g < mk_.goods; ++g)
        gap_allowance_.push_back(2 * eps_ * static_cast<double>(mk_.agents) * mk_.agent_per_good[a * mk_.goods + g]);
  }

  bool operator()(std::span<const double> prices) const {
    const std::size_t A = mk_.agents, G = mk_.goods;
    // Every good must be bought, so some agent group takes at least a
    // 1/A share of it; that group's gap on the good is then bounded by
    // 2 eps A count_a / count_g (at most 2 eps / delta mass sits on
    // delta-suboptimal goods).
    std::vector<char> covered(G, 0);
    for (std::size_t a = 0; a < A; ++a) {
      const auto u = mk_.utility_row(a);
      const auto d = best_dual<double>(u, prices);
      for (std::size_t g = 0; g < G; ++g) {
        const double gap = d.alpha * prices[g] + d.mu - u[g];
        if (gap <= gap_allowance_[a * G + g] + ScalarTraits<double>::tolerance) covered[g] = 1;
      }
    }
    for (char c : covered)
      if (!c) return false;
    return check_feasible(bundle_feasibility_lp<double>(mk_, prices, eps_)).feasible;
  }

 private:
  MarketArrays<double> mk_;
  double eps_;
  std::vector<double> gap_allowance_;
};

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Enumerates normalized prices k * h (some k_j = 0) with
/// sum_j count_j p_j <= min(2n, n (1 + eps)), keeps the points where a
/// bundle-feasible allocation exists, bisects towards each infeasible
/// grid neighbour to locate region boundaries, and groups everything
/// within max-norm distance 2h into clusters.
inline std::vector<EquilibriumCluster> find_equilibria(const GroupedMarket& m, const FinderOptions& opt = {}) {
  const std::size_t G = m.num_goods();
  if (G > opt.max_goods)
    throw TooLargeError("grid search supports at most " + std::to_string(opt.max_goods) + " good groups, got " +
                        std::to_string(G));
  if (opt.grid <= 0) throw std::invalid_argument("grid resolution must be positive");
  if (G == 0) return {};
  const Rational h = opt.grid;
  const Rational n(m.total_agents());
  const Rational budget = min(Rational(2 * n), Rational(n * (1 + opt.eps)));
  const Integer steps = floor(budget / h);  // bound on sum_j count_j k_j
  if (steps > 100000000) throw TooLargeError("grid too fine");
  const long total_steps = steps.get_si();
  std::vector<long> counts;
  for (const auto& g : m.goods()) counts.push_back(g.count.fits_slong_p() ? g.count.get_si() : total_steps + 1);

  // Enumerate normalized grid points.
  std::vector<long> points;  // flat, G per point
  std::vector<long> k(G, 0);
  auto enumerate = [&](auto&& self, std::size_t j, long remaining, bool has_zero) -> void {
    if (j == G) {
      if (has_zero) points.insert(points.end(), k.begin(), k.end());
      return;
    }
    for (long v = 0; v * counts[j] <= remaining; ++v) {
      k[j] = v;
      self(self, j + 1, remaining - v * counts[j], has_zero || v == 0);
    }
    k[j] = 0;
  };
  enumerate(enumerate, 0, total_steps, false);
  const std::size_t num_points = points.size() / G;

  const double hd = h.get_d();
  const detail::FloatScreen screen(m, opt.eps);
  std::vector<char> pass(num_points, 0);
  const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(opt.threads), 64));
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> price(G);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t g = 0; g < G; ++g) price[g] = static_cast<double>(points[i * G + g]) * hd;
      pass[i] = screen(price) ? 1 : 0;
    }
  };
  if (workers == 1) {
    work(0, num_points);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (num_points + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = std::min(num_points, w * chunk), e = std::min(num_points, b + chunk);
      pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
  }

  auto grid_prices = [&](std::size_t i) {
    std::vector<Rational> v;
    for (std::size_t g = 0; g < G; ++g) v.push_back(Rational(points[i * G + g]) * h);
    return PriceVector(std::move(v));
  };

  // Exact confirmation of screened grid points.
  std::vector<PriceVector> members;
  std::vector<std::vector<long>> grid_of_member;  // empty for refined points
  std::vector<std::size_t> anchor;                // member index a refined point hangs off
  std::vector<std::vector<long>> accepted_keys;
  for (std::size_t i = 0; i < num_points; ++i) {
    if (!pass[i]) continue;
    PriceVector p = grid_prices(i);
    if (!bundle_feasibility(m, p, opt.eps)) continue;
    std::vector<long> key(points.begin() + static_cast<std::ptrdiff_t>(i * G),
                          points.begin() + static_cast<std::ptrdiff_t>((i + 1) * G));
    anchor.push_back(members.size());
    members.push_back(std::move(p));
    grid_of_member.push_back(key);
    accepted_keys.push_back(std::move(key));
  }
  std::sort(accepted_keys.begin(), accepted_keys.end());
  auto accepted = [&](const std::vector<long>& key) {
    return std::binary_search(accepted_keys.begin(), accepted_keys.end(), key);
  };

  // Boundary refinement along each axis that keeps the vector normalized.
  const std::size_t grid_members = members.size();
  for (std::size_t i = 0; i < grid_members; ++i) {
    const auto key = grid_of_member[i];
    for (std::size_t axis = 0; axis < G; ++axis) {
      for (int dir : {-1, +1}) {
        std::vector<long> nb = key;
        nb[axis] += dir;
        if (nb[axis] < 0) continue;
        if (*std::min_element(nb.begin(), nb.end()) != 0) continue;
        if (accepted(nb)) continue;
        std::vector<double> base(G);
        for (std::size_t g = 0; g < G; ++g) base[g] = static_cast<double>(key[g]) * hd;
        double lo = 0, hi = 1;
        std::vector<double> probe = base;
        for (int s = 0; s < opt.refine_steps; ++s) {
          const double mid = (lo + hi) / 2;
          probe[axis] = base[axis] + dir * mid * hd;
          (screen(probe) ? lo : hi) = mid;
        }
        if (lo == 0) continue;
        std::vector<Rational> cand = members[i].values();
        cand[axis] = limit_denominator(base[axis] + dir * lo * hd, opt.max_denominator);
        if (cand[axis] < 0) continue;
        PriceVector pc(std::move(cand));
        if (!pc.normalized() || pc == members[i]) continue;
        if (std::find(members.begin(), members.end(), pc) != members.end()) continue;
        if (!bundle_feasibility(m, pc, opt.eps)) continue;
        anchor.push_back(i);
        members.push_back(std::move(pc));
        grid_of_member.emplace_back();
      }
    }
  }

  // Cluster: refined points join their anchor; grid points merge within 2h.
  detail::DisjointSets sets(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) sets.unite(i, anchor[i]);
  std::vector<std::size_t> order(grid_members);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid_of_member[a] < grid_of_member[b]; });
  for (std::size_t x = 0; x < order.size(); ++x) {
    const auto& ka = grid_of_member[order[x]];
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      const auto& kb = grid_of_member[order[y]];
      if (kb[0] - ka[0] > 2) break;
      bool close = true;
      for (std::size_t g = 0; g < G && close; ++g) close = std::labs(ka[g] - kb[g]) <= 2;
      if (close) sets.unite(order[x], order[y]);
    }
  }

  std::vector<EquilibriumCluster> clusters;
  std::vector<std::size_t> cluster_of(members.size(), SIZE_MAX);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (cluster_of[root] == SIZE_MAX) {
      cluster_of[root] = clusters.size();
      clusters.emplace_back();
    }
    clusters[cluster_of[root]].members.push_back(members[i]);
  }
  for (auto& c : clusters) {
    std::sort(c.members.begin(), c.members.end(), detail::lex_less);
    c.representative = c.members.front();
    c.diameter = 0;
    for (std::size_t g = 0; g < G; ++g) {
      Rational lo = c.members.front()[g], hi = lo;
      for (const auto& p : c.members) {
        lo = min(lo, p[g]);
        hi = max(hi, p[g]);
      }
      c.diameter = max(c.diameter, Rational(hi - lo));
    }
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const EquilibriumCluster& a, const EquilibriumCluster& b) { return detail::lex_less(a.representative, b.representative); });
  return clusters;
}

}  // namespace hzlab

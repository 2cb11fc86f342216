#pragma once

// 3SAT -> HZ market construction, the completeness equilibrium for a
// satisfying assignment, and price-based assignment extraction.

#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "hzlab/demand.hpp"
#include "hzlab/dimacs.hpp"
#include "hzlab/market.hpp"
#include "hzlab/ppad.hpp"
#include "hzlab/rational.hpp"

namespace hzlab {

class KTooSmallError : public ReductionError {
 public:
  explicit KTooSmallError(const std::string& what) : ReductionError(what) {}
};

struct SatVariableIndex {
  std::size_t g1 = 0, g2 = 0, g3 = 0;
  std::size_t a1 = 0, a2 = 0;
};

struct SatClauseIndex {
  std::size_t good = 0;   // G_j
  std::size_t star = 0;   // A_{j,*}
  std::size_t agent = 0;  // A_j
};

struct SatIndex {
  std::vector<SatVariableIndex> variables;
  std::vector<SatClauseIndex> clauses;
  std::size_t dummy = 0;
};

struct SatInstance {
  Cnf cnf;
  long K = 0;
  GroupedMarket market;
  SatIndex index;
};

namespace sat_ids {
inline std::string good(int i, int k) { return "G[x" + std::to_string(i) + "]." + std::to_string(k); }
inline std::string agents(int i, int k) { return "A[x" + std::to_string(i) + "]." + std::to_string(k); }
inline std::string clause_good(std::size_t j) { return "G[c" + std::to_string(j) + "]"; }
inline std::string clause_star(std::size_t j) { return "A[c" + std::to_string(j) + "].*"; }
inline std::string clause_agent(std::size_t j) { return "A[c" + std::to_string(j) + "]"; }
inline const std::string dummy = "dummy";
}  // namespace sat_ids

inline SatInstance build_sat_market(const Cnf& cnf, long K) {
  validate_cnf(cnf);
  if (K < 1) throw ReductionError("K must be positive");
  const Integer k(K);
  const Rational inv_k2 = Rational(1) / Rational(k * k);
  const Rational half_inv_k2 = inv_k2 / 2;
  std::vector<GoodGroup> goods;
  std::vector<AgentGroup> agents;
  SatIndex index;
  for (int i = 1; i <= cnf.variables; ++i) {
    SatVariableIndex v;
    v.g1 = goods.size();
    goods.push_back({sat_ids::good(i, 1), k});
    v.g2 = goods.size();
    goods.push_back({sat_ids::good(i, 2), 2 * k});
    v.g3 = goods.size();
    goods.push_back({sat_ids::good(i, 3), k});
    v.a1 = agents.size();
    agents.push_back({sat_ids::agents(i, 1), 2 * k, {{sat_ids::good(i, 1), half_inv_k2}, {sat_ids::good(i, 2), inv_k2}}});
    v.a2 = agents.size();
    agents.push_back({sat_ids::agents(i, 2), 2 * k, {{sat_ids::good(i, 3), half_inv_k2}, {sat_ids::good(i, 2), inv_k2}}});
    index.variables.push_back(v);
  }
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    SatClauseIndex c;
    const std::string gj = sat_ids::clause_good(j + 1);
    c.good = goods.size();
    goods.push_back({gj, k});
    c.star = agents.size();
    agents.push_back({sat_ids::clause_star(j + 1), 2 * k, {{gj, inv_k2}}});
    c.agent = agents.size();
    std::map<std::string, Rational> u{{gj, Rational(1)}};
    for (int lit : cnf.clauses[j]) u[sat_ids::good(std::abs(lit), lit > 0 ? 1 : 3)] = rational(5, 6);
    agents.push_back({sat_ids::clause_agent(j + 1), 1, std::move(u)});
    index.clauses.push_back(c);
  }
  index.dummy = goods.size();
  goods.push_back({sat_ids::dummy, (k + 1) * Integer(static_cast<unsigned long>(cnf.clauses.size()))});
  GroupedMarket market("sat(K=" + std::to_string(K) + ")", std::move(goods), std::move(agents), false);
  if (market.total_agents() != market.total_goods()) throw ReductionError("constructed market is unbalanced");
  return {cnf, K, std::move(market), std::move(index)};
}

/// Largest number of clauses a single variable can absorb while the
/// residual K/4 - s (K+1)/(2K+1) stays nonnegative.
inline long clause_capacity(long K) {
  const Integer k(K);
  return Integer(floor(Rational(k * (2 * k + 1), 4 * (k + 1)))).get_si();
}

namespace detail {

// Assigns every clause a variable that satisfies it without exceeding
// `capacity` clauses per variable. Clauses are processed in order and try
// variables by increasing index; earlier choices are revised through
// augmenting paths only when needed.
inline std::optional<std::vector<int>> assign_clauses(const Cnf& f, const std::vector<bool>& sigma, long capacity) {
  const std::size_t m = f.clauses.size();
  std::vector<std::vector<int>> options(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (int lit : f.clauses[j])
      if (sigma[std::abs(lit) - 1] == (lit > 0)) options[j].push_back(std::abs(lit));
    std::sort(options[j].begin(), options[j].end());
  }
  std::vector<int> phi(m, 0);
  std::vector<std::vector<std::size_t>> holders(f.variables + 1);
  auto augment = [&](auto&& self, std::size_t j, std::vector<char>& seen) -> bool {
    for (int var : options[j]) {
      if (seen[var]) continue;
      seen[var] = 1;
      if (static_cast<long>(holders[var].size()) < capacity) {
        holders[var].push_back(j);
        phi[j] = var;
        return true;
      }
      for (std::size_t slot = 0; slot < holders[var].size(); ++slot) {
        const std::size_t other = holders[var][slot];
        holders[var].erase(holders[var].begin() + static_cast<std::ptrdiff_t>(slot));
        if (self(self, other, seen)) {
          holders[var].push_back(j);
          phi[j] = var;
          return true;
        }
        holders[var].insert(holders[var].begin() + static_cast<std::ptrdiff_t>(slot), other);
      }
    }
    return false;
  };
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<char> seen(f.variables + 1, 0);
    if (!augment(augment, j, seen)) return std::nullopt;
  }
  return phi;
}

}  // namespace detail

struct CompletenessEquilibrium {
  Allocation x;
  PriceVector p;
  std::vector<int> phi;   // clause -> variable (1-based)
  std::vector<long> load; // s_i per variable
};

inline CompletenessEquilibrium completeness_equilibrium(const SatInstance& inst, const std::vector<bool>& sigma) {
  const Cnf& f = inst.cnf;
  if (static_cast<int>(sigma.size()) != f.variables)
    throw ReductionError("assignment has " + std::to_string(sigma.size()) + " values for " +
                         std::to_string(f.variables) + " variables");
  if (!satisfies(f, sigma)) throw ReductionError("assignment does not satisfy every clause");
  const long cap = clause_capacity(inst.K);
  auto phi = detail::assign_clauses(f, sigma, cap);
  if (!phi)
    throw KTooSmallError("K = " + std::to_string(inst.K) + " allows at most " + std::to_string(cap) +
                         " clauses per variable; no clause assignment fits");

  const GroupedMarket& m = inst.market;
  const Rational K(inst.K);
  const Rational c = (K + 1) / (2 * K + 1);
  std::vector<long> load(f.variables + 1, 0);
  for (int var : *phi) ++load[var];

  std::vector<Rational> prices(m.num_goods(), Rational(0));
  Allocation x(m.num_agents(), m.num_goods());
  for (int i = 1; i <= f.variables; ++i) {
    const auto& v = inst.index.variables[i - 1];
    const bool truth = sigma[i - 1];
    // The agent group whose free good is shared with clause agents, and
    // the group buying the other side of the gadget.
    const std::size_t host = truth ? v.a2 : v.a1, other = truth ? v.a1 : v.a2;
    const std::size_t free_good = truth ? v.g1 : v.g3, mid_good = truth ? v.g3 : v.g1;
    prices[v.g2] = rational(8, 5);
    prices[mid_good] = rational(4, 5);
    prices[free_good] = 0;
    x.at(other, free_good) = rational(3, 8);
    x.at(other, v.g2) = rational(5, 8);
    x.at(host, v.g2) = rational(3, 8);
    x.at(host, mid_good) = rational(1, 2);
    const Rational shared = load[i] * c;
    x.at(host, free_good) = (K / 4 - shared) / (2 * K);
    x.at(host, inst.index.dummy) = shared / (2 * K);
    if (x.at(host, free_good) < 0) throw KTooSmallError("negative residual allocation for variable " + std::to_string(i));
  }
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const auto& cl = inst.index.clauses[j];
    prices[cl.good] = (2 * K + 1) / K;
    x.at(cl.star, cl.good) = K / (2 * K + 1);
    x.at(cl.star, inst.index.dummy) = c;
    x.at(cl.agent, cl.good) = K / (2 * K + 1);
    const int var = (*phi)[j];
    const auto& v = inst.index.variables[var - 1];
    x.at(cl.agent, sigma[var - 1] ? v.g1 : v.g3) = c;
  }
  return {std::move(x), PriceVector(std::move(prices)), std::move(*phi),
          std::vector<long>(load.begin() + 1, load.end())};
}

/// Value (11K + 5) / (12K + 6) of every clause agent in the completeness
/// equilibrium.
inline Rational completeness_clause_value(long K) {
  const Rational k(K);
  return (11 * k + 5) / (12 * k + 6);
}

enum class VariableCase { true_like, false_like, mixed, unknown };

inline const char* to_string(VariableCase c) {
  switch (c) {
    case VariableCase::true_like:
      return "TRUE_LIKE";
    case VariableCase::false_like:
      return "FALSE_LIKE";
    case VariableCase::mixed:
      return "MIXED";
    case VariableCase::unknown:
      break;
  }
  return "UNKNOWN";
}

/// Nearest of the centres (0, 8/5, 4/5), (4/5, 8/5, 0), (2/3, 4/3, 2/3)
/// within max-norm distance `tol` of (p1, p2, p3).
inline VariableCase classify_variable_gadget(const Rational& p1, const Rational& p2, const Rational& p3,
                                             const Rational& tol) {
  struct Centre {
    VariableCase label;
    Rational a, b, c;
  };
  const Centre centres[] = {{VariableCase::true_like, 0, rational(8, 5), rational(4, 5)},
                            {VariableCase::false_like, rational(4, 5), rational(8, 5), 0},
                            {VariableCase::mixed, rational(2, 3), rational(4, 3), rational(2, 3)}};
  VariableCase best = VariableCase::unknown;
  std::optional<Rational> best_dist;
  for (const auto& c : centres) {
    const Rational d = max(abs(Rational(p1 - c.a)), max(abs(Rational(p2 - c.b)), abs(Rational(p3 - c.c))));
    if (d <= tol && (!best_dist || d < *best_dist)) {
      best = c.label;
      best_dist = d;
    }
  }
  return best;
}

struct ClauseReport {
  std::size_t clause = 0;  // 1-based
  Rational value;
  bool satisfied = false;  // under the extracted (partial) assignment
  Rational centre;         // 11/12 if satisfied, 7/8 otherwise
  Rational deviation;      // |value - centre|
};

struct SatExtraction {
  std::vector<VariableCase> cases;
  std::vector<bool> vacant;
  std::vector<std::optional<bool>> assignment;
  std::vector<ClauseReport> clauses;
  Rational welfare;
};

/// A gadget is vacant when no agent outside it holds any of its goods.
/// Non-vacant gadgets classified TRUE_LIKE give x_i = 1, FALSE_LIKE give
/// x_i = 0; everything else stays unassigned.
inline SatExtraction extract_assignment(const SatInstance& inst, const Allocation& x, const PriceVector& p,
                                        const Rational& tol) {
  const GroupedMarket& m = inst.market;
  check_shape(m, x);
  check_shape(m, p);
  SatExtraction out;
  for (std::size_t i = 0; i < inst.index.variables.size(); ++i) {
    const auto& v = inst.index.variables[i];
    bool vacant = true;
    for (std::size_t a = 0; a < m.num_agents() && vacant; ++a) {
      if (a == v.a1 || a == v.a2) continue;
      for (std::size_t g : {v.g1, v.g2, v.g3})
        if (x.at(a, g) > 0) vacant = false;
    }
    const VariableCase c = classify_variable_gadget(p[v.g1], p[v.g2], p[v.g3], tol);
    out.cases.push_back(c);
    out.vacant.push_back(vacant);
    std::optional<bool> value;
    if (!vacant && c == VariableCase::true_like) value = true;
    if (!vacant && c == VariableCase::false_like) value = false;
    out.assignment.push_back(value);
  }
  for (std::size_t j = 0; j < inst.cnf.clauses.size(); ++j) {
    ClauseReport r;
    r.clause = j + 1;
    r.value = bundle_value(m, x, inst.index.clauses[j].agent);
    for (int lit : inst.cnf.clauses[j]) {
      const auto& val = out.assignment[std::abs(lit) - 1];
      if (val && *val == (lit > 0)) r.satisfied = true;
    }
    r.centre = r.satisfied ? rational(11, 12) : rational(7, 8);
    r.deviation = abs(Rational(r.value - r.centre));
    out.clauses.push_back(r);
  }
  out.welfare = social_welfare(m, x);
  return out;
}

}  // namespace hzlab

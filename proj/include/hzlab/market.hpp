#pragma once

// Group-compressed Hylland-Zeckhauser markets: agents with a unit budget
// and unit demand, goods with unit supply, utilities in [0, 1]. Identical
// agents (goods) are stored once together with a multiplicity.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hzlab/rational.hpp"

namespace hzlab {

class MarketError : public std::runtime_error {
 public:
  explicit MarketError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidPriceError : public std::runtime_error {
 public:
  explicit InvalidPriceError(const std::string& what) : std::runtime_error(what) {}
};

struct GoodGroup {
  std::string id;
  Integer count;
};

struct AgentGroup {
  std::string id;
  Integer count;
  /// Sparse utilities keyed by good-group id; absent entries mean 0.
  std::map<std::string, Rational> utilities;
};

struct Violation {
  std::string condition;
  std::string subject;
  Rational magnitude;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class GroupedMarket {
 public:
  GroupedMarket() = default;
  GroupedMarket(std::string label, std::vector<GoodGroup> goods, std::vector<AgentGroup> agents,
                bool max_utility_one = false)
      : label_(std::move(label)),
        goods_(std::move(goods)),
        agents_(std::move(agents)),
        max_utility_one_(max_utility_one) {
    reindex();
  }

  const std::string& label() const { return label_; }
  const std::vector<GoodGroup>& goods() const { return goods_; }
  const std::vector<AgentGroup>& agents() const { return agents_; }
  std::size_t num_goods() const { return goods_.size(); }
  std::size_t num_agents() const { return agents_.size(); }
  bool max_utility_one() const { return max_utility_one_; }

  std::optional<std::size_t> find_good(const std::string& id) const {
    auto it = good_index_.find(id);
    if (it == good_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_agent(const std::string& id) const {
    auto it = agent_index_.find(id);
    if (it == agent_index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t good_index(const std::string& id) const {
    if (auto i = find_good(id)) return *i;
    throw MarketError("unknown good group '" + id + "'");
  }
  std::size_t agent_index(const std::string& id) const {
    if (auto i = find_agent(id)) return *i;
    throw MarketError("unknown agent group '" + id + "'");
  }

  /// Utility of one member of agent group `a` for one unit of good group `g`.
  Rational utility(std::size_t a, std::size_t g) const {
    const auto& u = agents_.at(a).utilities;
    auto it = u.find(goods_.at(g).id);
    return it == u.end() ? Rational(0) : it->second;
  }

  /// Dense utility row of agent group `a`, in good-group order.
  std::vector<Rational> utility_row(std::size_t a) const {
    std::vector<Rational> row(goods_.size());
    for (std::size_t g = 0; g < goods_.size(); ++g) row[g] = utility(a, g);
    return row;
  }

  Integer total_agents() const {
    Integer n = 0;
    for (const auto& a : agents_) n += a.count;
    return n;
  }
  Integer total_goods() const {
    Integer n = 0;
    for (const auto& g : goods_) n += g.count;
    return n;
  }

 private:
  void reindex() {
    for (std::size_t g = 0; g < goods_.size(); ++g) {
      if (!good_index_.emplace(goods_[g].id, g).second)
        throw MarketError("duplicate good group id '" + goods_[g].id + "'");
    }
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      if (!agent_index_.emplace(agents_[a].id, a).second)
        throw MarketError("duplicate agent group id '" + agents_[a].id + "'");
    }
  }

  std::string label_;
  std::vector<GoodGroup> goods_;
  std::vector<AgentGroup> agents_;
  bool max_utility_one_ = false;
  std::map<std::string, std::size_t> good_index_;
  std::map<std::string, std::size_t> agent_index_;
};

/// One price per good group, in the market's good-group order.
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(std::vector<Rational> prices) : prices_(std::move(prices)) {
    for (const auto& p : prices_)
      if (p < 0) throw InvalidPriceError("negative price " + to_string(p));
  }

  const std::vector<Rational>& values() const { return prices_; }
  const Rational& operator[](std::size_t g) const { return prices_.at(g); }
  std::size_t size() const { return prices_.size(); }

  Rational min() const {
    if (prices_.empty()) return 0;
    return *std::min_element(prices_.begin(), prices_.end());
  }
  bool normalized() const { return !prices_.empty() && min() == 0; }

  friend bool operator==(const PriceVector&, const PriceVector&) = default;
  friend std::ostream& operator<<(std::ostream& os, const PriceVector& p) {
    os << '(';
    for (std::size_t g = 0; g < p.size(); ++g) os << (g ? ", " : "") << to_string(p[g]);
    return os << ')';
  }

 private:
  std::vector<Rational> prices_;
};

/// Per-member allocation x[a][g] (uniform within each agent group).
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::size_t agents, std::size_t goods)
      : goods_(goods), entries_(agents * goods, Rational(0)) {}

  std::size_t num_agents() const { return goods_ == 0 ? 0 : entries_.size() / goods_; }
  std::size_t num_goods() const { return goods_; }

  const Rational& at(std::size_t a, std::size_t g) const { return entries_.at(a * goods_ + g); }
  Rational& at(std::size_t a, std::size_t g) { return entries_.at(a * goods_ + g); }

  std::vector<Rational> row(std::size_t a) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(a * goods_),
            entries_.begin() + static_cast<std::ptrdiff_t>((a + 1) * goods_)};
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::size_t goods_ = 0;
  std::vector<Rational> entries_;
};

struct Bundle {
  std::vector<Rational> shares;  // dense, good-group order
  Rational value;
  Rational cost;
};

// ---------------------------------------------------------------------------

inline std::vector<Violation> validate_market(const GroupedMarket& m) {
  std::vector<Violation> out;
  for (const auto& g : m.goods())
    if (g.count <= 0) out.push_back({"positive_count", g.id, Rational(g.count)});
  for (const auto& a : m.agents()) {
    if (a.count <= 0) out.push_back({"positive_count", a.id, Rational(a.count)});
    Rational best = 0;
    for (const auto& [gid, u] : a.utilities) {
      if (!m.find_good(gid)) out.push_back({"unknown_good", a.id + "->" + gid, u});
      if (u < 0 || u > 1) out.push_back({"utility_range", a.id + "->" + gid, u});
      best = max(best, u);
    }
    if (m.max_utility_one() && best != 1) out.push_back({"max_utility_one", a.id, best});
  }
  const Integer agents = m.total_agents();
  const Integer goods = m.total_goods();
  if (agents != goods) out.push_back({"count_balance", m.label(), Rational(agents - goods)});
  return out;
}

/// Result of rescaling prices toward 1 so the cheapest good is free.
struct NormalizedPrices {
  PriceVector prices;
  /// Scale factor r in p' = 1 + r (p - 1); empty when every price is at
  /// least 1 (the all-zero vector is returned and r is unbounded).
  std::optional<Rational> scale;
};

inline NormalizedPrices normalize_prices(const PriceVector& p) {
  for (const auto& x : p.values())
    if (x < 0) throw InvalidPriceError("negative price " + to_string(x));
  const Rational lo = p.min();
  if (lo >= 1) return {PriceVector(std::vector<Rational>(p.size(), Rational(0))), std::nullopt};
  Rational r = 1 / (1 - lo);
  std::vector<Rational> out;
  out.reserve(p.size());
  for (const auto& x : p.values()) out.push_back(1 + r * (x - 1));
  return {PriceVector(std::move(out)), r};
}

/// Rescales prices by p' = 1 + r (p - 1) for an admissible r > 0.
inline PriceVector scale_prices(const PriceVector& p, const Rational& r) {
  if (r <= 0) throw InvalidPriceError("scale factor must be positive");
  std::vector<Rational> out;
  for (const auto& x : p.values()) {
    Rational y = 1 + r * (x - 1);
    if (y < 0) throw InvalidPriceError("scale factor " + to_string(r) + " drives a price negative");
    out.push_back(y);
  }
  return PriceVector(std::move(out));
}

inline void check_shape(const GroupedMarket& m, const Allocation& x) {
  if (x.num_agents() != m.num_agents() || x.num_goods() != m.num_goods())
    throw MarketError("allocation shape does not match market");
}

inline void check_shape(const GroupedMarket& m, const PriceVector& p) {
  if (p.size() != m.num_goods()) throw MarketError("price vector size does not match market");
}

inline Rational bundle_value(const GroupedMarket& m, const Allocation& x, std::size_t a) {
  Rational v = 0;
  for (std::size_t g = 0; g < m.num_goods(); ++g) v += m.utility(a, g) * x.at(a, g);
  return v;
}

inline Rational bundle_cost(const PriceVector& p, const Allocation& x, std::size_t a) {
  Rational c = 0;
  for (std::size_t g = 0; g < p.size(); ++g) c += p[g] * x.at(a, g);
  return c;
}

inline Rational social_welfare(const GroupedMarket& m, const Allocation& x) {
  check_shape(m, x);
  Rational total = 0;
  for (std::size_t a = 0; a < m.num_agents(); ++a)
    total += Rational(m.agents()[a].count) * bundle_value(m, x, a);
  return total;
}

/// True when every agent weakly prefers `xa` to `xb` and some agent strictly.
inline bool pareto_dominates(const GroupedMarket& m, const Allocation& xa, const Allocation& xb) {
  check_shape(m, xa);
  check_shape(m, xb);
  bool strict = false;
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    const Rational va = bundle_value(m, xa, a);
    const Rational vb = bundle_value(m, xb, a);
    if (va < vb) return false;
    if (va > vb) strict = true;
  }
  return strict;
}

/// Per-unit form: every agent and every good becomes its own group of
/// size one, named "<group id>#<k>". Test-scale only.
inline GroupedMarket expand(const GroupedMarket& m) {
  std::vector<GoodGroup> goods;
  std::map<std::string, std::vector<std::string>> units_of;
  for (const auto& g : m.goods()) {
    for (Integer k = 0; k < g.count; ++k) {
      std::string id = g.id + "#" + k.get_str();
      units_of[g.id].push_back(id);
      goods.push_back({id, 1});
    }
  }
  std::vector<AgentGroup> agents;
  for (const auto& a : m.agents()) {
    std::map<std::string, Rational> u;
    for (const auto& [gid, val] : a.utilities)
      for (const auto& unit : units_of[gid]) u.emplace(unit, val);
    for (Integer k = 0; k < a.count; ++k) agents.push_back({a.id + "#" + k.get_str(), 1, u});
  }
  return GroupedMarket(m.label(), std::move(goods), std::move(agents), m.max_utility_one());
}

/// Merges goods with identical utility columns and agents with identical
/// utility rows. Merged groups keep the id of their first member with any
/// "#k" suffix stripped.
inline GroupedMarket compact(const GroupedMarket& m) {
  auto base = [](const std::string& id) { return id.substr(0, id.rfind('#')); };
  std::vector<std::vector<Rational>> columns(m.num_goods());
  for (std::size_t g = 0; g < m.num_goods(); ++g)
    for (std::size_t a = 0; a < m.num_agents(); ++a) columns[g].push_back(m.utility(a, g));
  std::vector<GoodGroup> goods;
  std::vector<std::size_t> merged_good(m.num_goods());
  std::vector<std::size_t> representative;
  for (std::size_t g = 0; g < m.num_goods(); ++g) {
    std::size_t k = 0;
    while (k < goods.size() && columns[representative[k]] != columns[g]) ++k;
    if (k == goods.size()) {
      goods.push_back({base(m.goods()[g].id), 0});
      representative.push_back(g);
    }
    goods[k].count += m.goods()[g].count;
    merged_good[g] = k;
  }
  std::vector<AgentGroup> agents;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    std::vector<Rational> row(goods.size());
    for (std::size_t g = 0; g < m.num_goods(); ++g) row[merged_good[g]] = m.utility(a, g);
    std::size_t k = 0;
    while (k < agents.size() && rows[k] != row) ++k;
    if (k == agents.size()) {
      std::map<std::string, Rational> u;
      for (std::size_t g = 0; g < goods.size(); ++g)
        if (row[g] != 0) u.emplace(goods[g].id, row[g]);
      agents.push_back({base(m.agents()[a].id), 0, std::move(u)});
      rows.push_back(row);
    }
    agents[k].count += m.agents()[a].count;
  }
  return GroupedMarket(m.label(), std::move(goods), std::move(agents), m.max_utility_one());
}

/// Divides each agent group's utilities by its maximum utility so every
/// agent's favourite good has utility exactly 1. Exact equilibria are
/// unchanged by positive per-agent scaling; approximate ones are not.
inline GroupedMarket rescale_to_unit_max(const GroupedMarket& m) {
  std::vector<AgentGroup> agents = m.agents();
  for (auto& a : agents) {
    Rational best = 0;
    for (const auto& [gid, u] : a.utilities) best = max(best, u);
    if (best == 0) throw MarketError("agent group '" + a.id + "' has no positive utility");
    for (auto& [gid, u] : a.utilities) u /= best;
  }
  return GroupedMarket(m.label(), m.goods(), std::move(agents), true);
}

}  // namespace hzlab

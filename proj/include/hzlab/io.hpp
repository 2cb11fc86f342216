#pragma once

// JSON documents for markets, prices, allocations and verdicts.
//
//   market:     {"label", "good_groups": [{"id", "count"}],
//                "agent_groups": [{"id", "count", "utilities": {good: "a/b"}}]}
//   prices:     {"prices": {good: "a/b"}}
//   allocation: {"allocation": {agent: {good: "a/b"}}}
//
// Rationals are "a/b" strings. Counts may be integers or decimal strings.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hzlab/market.hpp"
#include "hzlab/rational.hpp"
#include "hzlab/verdict.hpp"

namespace hzlab {

using Json = nlohmann::ordered_json;

/// Malformed input; the message starts with the location.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

inline Rational rational_at(const Json& v, const std::string& where) {
  if (!v.is_string()) throw InputError(where + ": expected an \"a/b\" string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline Integer count_at(const Json& v, const std::string& where) {
  Integer n;
  if (v.is_number_integer()) {
    if (v.get<long long>() < 0) throw InputError(where + ": negative count");
    n = Integer(std::to_string(v.get<long long>()));
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InputError(where + ": count '" + s + "' is not a non-negative integer");
    n = Integer(s);
  } else {
    throw InputError(where + ": expected a non-negative integer count");
  }
  return n;
}

inline Json count_json(const Integer& n) {
  if (n.fits_slong_p()) return Json(n.get_si());
  return Json(n.get_str());
}

inline std::string id_at(const Json& v, const std::string& where) {
  if (!v.is_string() || v.get<std::string>().empty()) throw InputError(where + ": expected a non-empty id string");
  return v.get<std::string>();
}

}  // namespace detail

inline Json parse_json(std::istream& in, const std::string& source) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return parse_json(in, path);
}

inline GroupedMarket market_from_json(const Json& doc, const std::string& source = "market") {
  using detail::field;
  if (!doc.is_object()) throw InputError(source + ": expected an object");
  std::string label;
  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) throw InputError(source + "/label: expected a string");
    label = it->get<std::string>();
  }
  const Json& gs = field(doc, "good_groups", source);
  const Json& as = field(doc, "agent_groups", source);
  if (!gs.is_array()) throw InputError(source + "/good_groups: expected an array");
  if (!as.is_array()) throw InputError(source + "/agent_groups: expected an array");
  std::vector<GoodGroup> goods;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const std::string where = source + "/good_groups/" + std::to_string(i);
    goods.push_back({detail::id_at(field(gs[i], "id", where), where + "/id"),
                     detail::count_at(field(gs[i], "count", where), where + "/count")});
  }
  std::vector<AgentGroup> agents;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const std::string where = source + "/agent_groups/" + std::to_string(i);
    AgentGroup a{detail::id_at(field(as[i], "id", where), where + "/id"),
                 detail::count_at(field(as[i], "count", where), where + "/count"),
                 {}};
    const Json& us = field(as[i], "utilities", where);
    if (!us.is_object()) throw InputError(where + "/utilities: expected an object");
    for (const auto& [g, u] : us.items()) a.utilities[g] = detail::rational_at(u, where + "/utilities/" + g);
    agents.push_back(std::move(a));
  }
  bool unit_max = false;
  if (auto it = doc.find("max_utility_one"); it != doc.end()) {
    if (!it->is_boolean()) throw InputError(source + "/max_utility_one: expected a boolean");
    unit_max = it->get<bool>();
  }
  try {
    return GroupedMarket(label, std::move(goods), std::move(agents), unit_max);
  } catch (const MarketError& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline Json market_to_json(const GroupedMarket& m) {
  Json doc;
  doc["label"] = m.label();
  if (m.max_utility_one()) doc["max_utility_one"] = true;
  doc["good_groups"] = Json::array();
  for (const auto& g : m.goods()) doc["good_groups"].push_back({{"id", g.id}, {"count", detail::count_json(g.count)}});
  doc["agent_groups"] = Json::array();
  for (const auto& a : m.agents()) {
    Json u = Json::object();
    for (const auto& g : m.goods())
      if (auto it = a.utilities.find(g.id); it != a.utilities.end() && it->second != 0) u[g.id] = to_string(it->second);
    doc["agent_groups"].push_back({{"id", a.id}, {"count", detail::count_json(a.count)}, {"utilities", std::move(u)}});
  }
  return doc;
}

inline PriceVector prices_from_json(const GroupedMarket& m, const Json& doc, const std::string& source = "prices") {
  const Json& ps = detail::field(doc, "prices", source);
  if (!ps.is_object()) throw InputError(source + "/prices: expected an object keyed by good-group id");
  std::vector<Rational> values(m.num_goods());
  std::vector<bool> seen(m.num_goods(), false);
  for (const auto& [g, v] : ps.items()) {
    const std::string where = source + "/prices/" + g;
    auto idx = m.find_good(g);
    if (!idx) throw InputError(where + ": unknown good group");
    values[*idx] = detail::rational_at(v, where);
    if (values[*idx] < 0) throw InputError(where + ": negative price");
    seen[*idx] = true;
  }
  for (std::size_t g = 0; g < m.num_goods(); ++g)
    if (!seen[g]) throw InputError(source + "/prices: missing good group '" + m.goods()[g].id + "'");
  return PriceVector(std::move(values));
}

inline Json prices_to_json(const GroupedMarket& m, const PriceVector& p) {
  check_shape(m, p);
  Json ps = Json::object();
  for (std::size_t g = 0; g < m.num_goods(); ++g) ps[m.goods()[g].id] = to_string(p[g]);
  return Json{{"prices", std::move(ps)}};
}

inline Allocation allocation_from_json(const GroupedMarket& m, const Json& doc, const std::string& source = "allocation") {
  const Json& xs = detail::field(doc, "allocation", source);
  if (!xs.is_object()) throw InputError(source + "/allocation: expected an object keyed by agent-group id");
  Allocation x(m.num_agents(), m.num_goods());
  for (const auto& [a, row] : xs.items()) {
    const std::string where = source + "/allocation/" + a;
    auto ai = m.find_agent(a);
    if (!ai) throw InputError(where + ": unknown agent group");
    if (!row.is_object()) throw InputError(where + ": expected an object keyed by good-group id");
    for (const auto& [g, v] : row.items()) {
      auto gi = m.find_good(g);
      if (!gi) throw InputError(where + "/" + g + ": unknown good group");
      x.at(*ai, *gi) = detail::rational_at(v, where + "/" + g);
      if (x.at(*ai, *gi) < 0) throw InputError(where + "/" + g + ": negative share");
    }
  }
  return x;
}

inline Json allocation_to_json(const GroupedMarket& m, const Allocation& x) {
  check_shape(m, x);
  Json xs = Json::object();
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    Json row = Json::object();
    for (std::size_t g = 0; g < m.num_goods(); ++g)
      if (x.at(a, g) != 0) row[m.goods()[g].id] = to_string(x.at(a, g));
    xs[m.agents()[a].id] = std::move(row);
  }
  return Json{{"allocation", std::move(xs)}};
}

inline Json verdict_to_json(const Verdict& v) {
  Json vs = Json::array();
  for (const auto& x : v.violations)
    vs.push_back({{"condition", x.condition}, {"subject", x.subject}, {"magnitude", to_string(x.magnitude)}});
  return Json{{"pass", v.pass()}, {"violations", std::move(vs)}};
}

inline std::string verdict_to_text(const Verdict& v) {
  std::ostringstream os;
  os << (v.pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& x : v.violations)
    os << "  " << x.condition << ' ' << x.subject << ' ' << to_string(x.magnitude) << '\n';
  return os.str();
}

}  // namespace hzlab

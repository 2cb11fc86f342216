#pragma once

// Command-line driver. Exit codes: 0 success, 1 verification failed,
// 2 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hzlab/demand.hpp"
#include "hzlab/dimacs.hpp"
#include "hzlab/equilibrium.hpp"
#include "hzlab/io.hpp"
#include "hzlab/padding.hpp"
#include "hzlab/ppad.hpp"
#include "hzlab/sat.hpp"
#include "hzlab/threshold_game.hpp"

namespace hzlab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_input = 2;

namespace detail {

inline Rational option_rational(const std::string& text, const std::string& name) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw InputError("option " + name + ": " + e.what());
  }
}

inline std::vector<long> parse_long_list(const std::string& text, const std::string& name) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError("option " + name + ": '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("option " + name + ": empty list");
  return out;
}

inline Cnf read_cnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return parse_dimacs(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline ThresholdGame read_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return parse_threshold_game(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const GameError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline GroupedMarket read_market(const std::string& path) { return market_from_json(read_json_file(path), path); }

inline std::vector<bool> parse_assignment(const std::string& text, int variables) {
  std::vector<bool> sigma(variables, false);
  std::vector<bool> seen(variables, false);
  for (long lit : parse_long_list(text, "--assignment")) {
    const long v = lit < 0 ? -lit : lit;
    if (v < 1 || v > variables)
      throw InputError("option --assignment: literal " + std::to_string(lit) + " out of range");
    if (seen[v - 1]) throw InputError("option --assignment: variable " + std::to_string(v) + " given twice");
    seen[v - 1] = true;
    sigma[v - 1] = lit > 0;
  }
  for (int i = 0; i < variables; ++i)
    if (!seen[i]) throw InputError("option --assignment: variable " + std::to_string(i + 1) + " missing");
  return sigma;
}

inline std::string price_text(const GroupedMarket& m, const PriceVector& p) {
  std::ostringstream os;
  for (std::size_t g = 0; g < m.num_goods(); ++g)
    os << (g ? " " : "") << m.goods()[g].id << '=' << to_string(p[g]);
  return os.str();
}

}  // namespace detail

struct Options {
  std::string format = "text";
  // verify
  std::string mode = "exact";
  std::string epsilon = "0";
  std::string market, allocation, prices, input;
  // solve
  std::string grid = "1/50";
  int refine_steps = 30;
  long max_denominator = 10000;
  unsigned threads = 0;
  // demand
  std::string agent_group;
  // reductions
  long m = 2;
  long K = 8;
  std::string assignment;
  std::string tolerance = "1/100";
  std::string n = "2";
  std::string m_list = "4,8,16,32";
  int pairs = 5;
  unsigned seed = 1;
};

class Runner {
 public:
  explicit Runner(std::ostream& out) : out_(out) {}

  int verify(const Options& o) {
    const auto m = detail::read_market(o.market);
    const auto x = allocation_from_json(m, read_json_file(o.allocation), o.allocation);
    const auto p = prices_from_json(m, read_json_file(o.prices), o.prices);
    const Rational eps = detail::option_rational(o.epsilon, "--epsilon");
    if (eps < 0) throw InputError("option --epsilon: must be non-negative");
    Verdict v;
    try {
      if (o.mode == "exact") v = verify_exact(m, x, p);
      else if (o.mode == "approx") v = verify_approx(m, x, p, eps);
      else v = verify_relaxed(m, x, p, eps);
    } catch (const NormalizationError&) {
      v.violations.push_back({condition::normalized, "prices", p.min()});
    } catch (const MarketError& e) {
      throw InputError(o.allocation + ": " + e.what());
    }
    emit_verdict(v);
    return v.pass() ? exit_ok : exit_failed;
  }

  int solve(const Options& o) {
    const auto m = detail::read_market(o.market);
    FinderOptions f;
    f.grid = detail::option_rational(o.grid, "--grid");
    f.eps = detail::option_rational(o.epsilon, "--epsilon");
    f.refine_steps = o.refine_steps;
    f.max_denominator = o.max_denominator;
    f.threads = o.threads;
    std::vector<EquilibriumCluster> clusters;
    try {
      clusters = find_equilibria(m, f);
    } catch (const TooLargeError& e) {
      throw InputError(o.market + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    if (json()) {
      Json cs = Json::array();
      for (const auto& c : clusters) {
        Json members = Json::array();
        for (const auto& p : c.members) members.push_back(prices_to_json(m, p)["prices"]);
        cs.push_back({{"representative", prices_to_json(m, c.representative)["prices"]},
                      {"diameter", to_string(c.diameter)},
                      {"members", std::move(members)}});
      }
      out_ << Json{{"clusters", clusters.size()}, {"equilibria", std::move(cs)}}.dump(2) << '\n';
    } else {
      out_ << "clusters: " << clusters.size() << '\n';
      for (std::size_t i = 0; i < clusters.size(); ++i)
        out_ << "  [" << i + 1 << "] " << detail::price_text(m, clusters[i].representative)
             << "  members " << clusters[i].members.size() << "  diameter " << to_string(clusters[i].diameter)
             << '\n';
    }
    return exit_ok;
  }

  int demand(const Options& o) {
    const auto m = detail::read_market(o.market);
    const auto p = prices_from_json(m, read_json_file(o.prices), o.prices);
    auto a = m.find_agent(o.agent_group);
    if (!a) throw InputError("option --agent-group: unknown agent group '" + o.agent_group + "'");
    Bundle b;
    DualCertificate d;
    try {
      b = optimal_bundle(m, *a, p);
      d = dual_optimum(m, *a, p);
    } catch (const InfeasibleDemandError& e) {
      throw InputError(o.prices + ": " + e.what());
    }
    if (json()) {
      Json shares = Json::object();
      for (std::size_t g = 0; g < m.num_goods(); ++g)
        if (b.shares[g] != 0) shares[m.goods()[g].id] = to_string(b.shares[g]);
      out_ << Json{{"agent_group", o.agent_group}, {"bundle", std::move(shares)}, {"value", to_string(b.value)},
                   {"cost", to_string(b.cost)}, {"alpha", to_string(d.alpha)}, {"mu", to_string(d.mu)}}
                  .dump(2)
           << '\n';
    } else {
      out_ << "agent group " << o.agent_group << '\n' << "  bundle";
      for (std::size_t g = 0; g < m.num_goods(); ++g)
        if (b.shares[g] != 0) out_ << ' ' << m.goods()[g].id << '=' << to_string(b.shares[g]);
      out_ << "\n  value " << to_string(b.value) << "\n  cost " << to_string(b.cost) << "\n  alpha* "
           << to_string(d.alpha) << "\n  mu* " << to_string(d.mu) << '\n';
    }
    return exit_ok;
  }

  int reduce_threshold(const Options& o) {
    out_ << market_to_json(ppad_instance(detail::read_game(o.input), o).market).dump(2) << '\n';
    return exit_ok;
  }

  int reduce_sat(const Options& o) {
    const auto f = detail::read_cnf(o.input);
    out_ << market_to_json(sat_instance(f, o.K).market).dump(2) << '\n';
    return exit_ok;
  }

  int complete_sat(const Options& o) {
    const auto f = detail::read_cnf(o.input);
    const auto inst = sat_instance(f, o.K);
    const auto sigma = detail::parse_assignment(o.assignment, f.variables);
    CompletenessEquilibrium eq;
    try {
      eq = completeness_equilibrium(inst, sigma);
    } catch (const ReductionError& e) {
      throw InputError(o.input + ": " + e.what());
    }
    out_ << Json{{"market", market_to_json(inst.market)},
                 {"prices", prices_to_json(inst.market, eq.p)["prices"]},
                 {"allocation", allocation_to_json(inst.market, eq.x)["allocation"]}}
                .dump(2)
         << '\n';
    return exit_ok;
  }

  int extract(const Options& o, bool threshold) {
    if (threshold) {
      const auto g = detail::read_game(o.input);
      const PpadInstance inst = ppad_instance(g, o);
      const auto p = prices_from_json(inst.market, read_json_file(o.prices), o.prices);
      const auto x = extract_threshold_profile(inst, p);
      const Verdict v = verify_profile(g, x);
      if (json()) {
        Json values = Json::object();
        for (std::size_t i = 0; i < x.size(); ++i) values[g.node_id(i)] = to_string(x[i]);
        Json doc = verdict_to_json(v);
        doc["profile"] = std::move(values);
        out_ << doc.dump(2) << '\n';
      } else {
        for (std::size_t i = 0; i < x.size(); ++i) out_ << "x[" << g.node_id(i) << "] = " << to_string(x[i]) << '\n';
        out_ << verdict_to_text(v);
      }
      return v.pass() ? exit_ok : exit_failed;
    }
    const auto f = detail::read_cnf(o.input);
    const auto inst = sat_instance(f, o.K);
    const auto p = prices_from_json(inst.market, read_json_file(o.prices), o.prices);
    const auto x = allocation_from_json(inst.market, read_json_file(o.allocation), o.allocation);
    const auto r = extract_assignment(inst, x, p, detail::option_rational(o.tolerance, "--tolerance"));
    if (json()) {
      Json vars = Json::array();
      for (std::size_t i = 0; i < r.cases.size(); ++i)
        vars.push_back({{"variable", i + 1},
                        {"case", to_string(r.cases[i])},
                        {"vacant", static_cast<bool>(r.vacant[i])},
                        {"value", r.assignment[i] ? Json(*r.assignment[i]) : Json()}});
      Json cls = Json::array();
      for (const auto& c : r.clauses)
        cls.push_back({{"clause", c.clause}, {"value", to_string(c.value)}, {"satisfied", c.satisfied},
                       {"deviation", to_string(c.deviation)}});
      out_ << Json{{"variables", std::move(vars)}, {"clauses", std::move(cls)}, {"welfare", to_string(r.welfare)}}
                  .dump(2)
           << '\n';
    } else {
      for (std::size_t i = 0; i < r.cases.size(); ++i)
        out_ << 'x' << i + 1 << ' ' << to_string(r.cases[i]) << (r.vacant[i] ? " vacant" : "") << " -> "
             << (r.assignment[i] ? (*r.assignment[i] ? "1" : "0") : "?") << '\n';
      for (const auto& c : r.clauses)
        out_ << 'c' << c.clause << " value " << to_string(c.value) << (c.satisfied ? " satisfied" : " unsatisfied")
             << " deviation " << to_string(c.deviation) << '\n';
      out_ << "welfare " << to_string(r.welfare) << '\n';
    }
    return exit_ok;
  }

  int pad(const Options& o) {
    const auto m = detail::read_market(o.market);
    const Rational n = detail::option_rational(o.n, "--n");
    if (n.get_den() != 1 || n < 1) throw InputError("option --n: must be a positive integer");
    out_ << market_to_json(pad_market(m, n.get_num())).dump(2) << '\n';
    return exit_ok;
  }

  int report_gadgets(const Options& o) {
    const auto ms = detail::parse_long_list(o.m_list, "--m-list");
    std::mt19937_64 rng(o.seed);
    Json rows = Json::array();
    if (!json()) out_ << "m  p_u  p_v  total_u(meas/pred)  total_v(meas/pred)  first_v1 error\n";
    for (long m : ms) {
      if (m < 2) throw InputError("option --m-list: m must be at least 2");
      const Integer den = ipow(Integer(m), 6);
      const Integer hi = ipow(Integer(m), 4);
      std::uniform_int_distribution<long> pick(0, hi.get_si());
      for (int t = 0; t < o.pairs; ++t) {
        const Rational pu = Rational(Integer(pick(rng))) / Rational(den);
        const Rational pv = Rational(Integer(pick(rng))) / Rational(den);
        const auto meas = measure_edge_gadget(pu, pv, m);
        const auto pred = predict_edge_gadget(pu, pv, m);
        const Rational err = meas.first_v1 - pred.first_v1;
        if (json()) {
          rows.push_back({{"m", m}, {"p_u", to_string(pu)}, {"p_v", to_string(pv)},
                          {"total_u", to_string(meas.total_u)}, {"predicted_total_u", to_string(pred.total_u)},
                          {"total_v", to_string(meas.total_v)}, {"predicted_total_v", to_string(pred.total_v)},
                          {"first_v1_error", to_string(err)}});
        } else {
          out_ << m << "  " << to_string(pu) << "  " << to_string(pv) << "  "
               << to_double(meas.total_u) << '/' << to_double(pred.total_u) << "  " << to_double(meas.total_v)
               << '/' << to_double(pred.total_v) << "  " << to_double(err) << '\n';
        }
      }
    }
    if (json()) out_ << Json{{"rows", std::move(rows)}}.dump(2) << '\n';
    return exit_ok;
  }

  int welfare(const Options& o) {
    const auto m = detail::read_market(o.market);
    const auto x = allocation_from_json(m, read_json_file(o.allocation), o.allocation);
    const Rational w = social_welfare(m, x);
    if (json()) out_ << Json{{"welfare", to_string(w)}}.dump(2) << '\n';
    else out_ << "welfare " << to_string(w) << '\n';
    return exit_ok;
  }

  void set_format(const std::string& f) { format_ = f; }

 private:
  bool json() const { return format_ == "json"; }

  static PpadInstance ppad_instance(const ThresholdGame& g, const Options& o) {
    try {
      return build_ppad_market(g, o.m);
    } catch (const ReductionError& e) {
      throw InputError(o.input + ": " + e.what());
    }
  }

  SatInstance sat_instance(const Cnf& f, long K) {
    if (K < 1) throw InputError("option --K: must be at least 1");
    return build_sat_market(f, K);
  }

  void emit_verdict(const Verdict& v) {
    if (json()) out_ << verdict_to_json(v).dump(2) << '\n';
    else out_ << verdict_to_text(v);
  }

  std::ostream& out_;
  std::string format_ = "text";
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Hylland-Zeckhauser market toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto file = [](CLI::App* sub, const char* name, std::string& target) {
    sub->add_option(name, target)->required()->check(CLI::ExistingFile);
  };

  auto* verify = app.add_subcommand("verify", "check a (prices, allocation) pair");
  verify->add_option("--mode", o.mode)->check(CLI::IsMember({"exact", "approx", "relaxed"}));
  verify->add_option("--epsilon", o.epsilon, "a/b");
  file(verify, "market", o.market);
  file(verify, "allocation", o.allocation);
  file(verify, "prices", o.prices);

  auto* solve = app.add_subcommand("solve", "grid search for equilibria");
  solve->add_option("--grid", o.grid, "spacing 1/k");
  solve->add_option("--epsilon", o.epsilon, "a/b");
  solve->add_option("--refine-steps", o.refine_steps)->check(CLI::NonNegativeNumber);
  solve->add_option("--max-denominator", o.max_denominator)->check(CLI::PositiveNumber);
  solve->add_option("--threads", o.threads);
  file(solve, "market", o.market);

  auto* demand = app.add_subcommand("demand", "optimal bundle and dual certificate");
  demand->add_option("--agent-group", o.agent_group)->required();
  file(demand, "market", o.market);
  file(demand, "prices", o.prices);

  auto* rt = app.add_subcommand("reduce-threshold", "threshold game to market");
  rt->add_option("--m", o.m)->check(CLI::Range(2L, 1000L));
  file(rt, "game", o.input);

  auto* rs = app.add_subcommand("reduce-sat", "3-CNF to market");
  rs->add_option("--K", o.K);
  file(rs, "cnf", o.input);

  auto* cs = app.add_subcommand("complete-sat", "equilibrium from a satisfying assignment");
  cs->add_option("--K", o.K);
  cs->add_option("--assignment", o.assignment, "literals, e.g. 1,-2,3")->required();
  file(cs, "cnf", o.input);

  auto* ex = app.add_subcommand("extract", "read a game profile or an assignment off prices");
  std::string game, cnf;
  ex->add_option("--game", game)->check(CLI::ExistingFile);
  ex->add_option("--cnf", cnf)->check(CLI::ExistingFile);
  ex->add_option("--m", o.m)->check(CLI::Range(2L, 1000L));
  ex->add_option("--K", o.K);
  ex->add_option("--allocation", o.allocation)->check(CLI::ExistingFile);
  ex->add_option("--tolerance", o.tolerance, "a/b");
  file(ex, "prices", o.prices);

  auto* pad = app.add_subcommand("pad", "replicate every group n times");
  pad->add_option("--n", o.n);
  file(pad, "market", o.market);

  auto* rg = app.add_subcommand("report-gadgets", "edge-gadget sweep");
  rg->add_option("--m-list", o.m_list, "comma separated");
  rg->add_option("--pairs", o.pairs)->check(CLI::PositiveNumber);
  rg->add_option("--seed", o.seed);

  auto* welfare = app.add_subcommand("welfare", "social welfare of an allocation");
  file(welfare, "market", o.market);
  file(welfare, "allocation", o.allocation);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_input;
  }

  Runner r(out);
  r.set_format(o.format);
  try {
    if (*verify) return r.verify(o);
    if (*solve) return r.solve(o);
    if (*demand) return r.demand(o);
    if (*rt) return r.reduce_threshold(o);
    if (*rs) return r.reduce_sat(o);
    if (*cs) return r.complete_sat(o);
    if (*ex) {
      if (game.empty() == cnf.empty()) throw InputError("extract: give exactly one of --game or --cnf");
      if (!game.empty()) {
        o.input = game;
        return r.extract(o, true);
      }
      if (o.allocation.empty()) throw InputError("extract: --cnf needs --allocation");
      o.input = cnf;
      return r.extract(o, false);
    }
    if (*pad) return r.pad(o);
    if (*rg) return r.report_gadgets(o);
    if (*welfare) return r.welfare(o);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_input;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_input;
  } catch (const MarketError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_input;
  } catch (const InvalidPriceError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}

}  // namespace hzlab::cli

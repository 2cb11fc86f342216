#pragma once

// Threshold games on directed graphs. Node v best-responds when
//
//   sum_{(u,v) in E} x_u > 1/2 + kappa  =>  x_v <= kappa
//   sum_{(u,v) in E} x_u < 1/2 - kappa  =>  x_v >= 1 - kappa
//
// and is unconstrained in between (boundary values included).

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hzlab/rational.hpp"
#include "hzlab/verdict.hpp"

namespace hzlab {

class GameError : public std::runtime_error {
 public:
  explicit GameError(const std::string& what) : std::runtime_error(what) {}
};

class NoGridSolutionError : public std::runtime_error {
 public:
  explicit NoGridSolutionError(const std::string& what) : std::runtime_error(what) {}
};

using Edge = std::pair<std::size_t, std::size_t>;

class ThresholdGame {
 public:
  ThresholdGame(std::size_t nodes, std::vector<Edge> edges, Rational kappa, bool degree_bounded = false)
      : nodes_(nodes), edges_(std::move(edges)), kappa_(std::move(kappa)), degree_bounded_(degree_bounded) {
    if (kappa_ <= 0 || kappa_ >= rational(1, 2)) throw GameError("kappa must lie in (0, 1/2), got " + to_string(kappa_));
    std::set<Edge> seen;
    in_.assign(nodes_, {});
    out_degree_.assign(nodes_, 0);
    for (const auto& [u, v] : edges_) {
      if (u >= nodes_ || v >= nodes_)
        throw GameError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") references a missing node");
      if (!seen.insert({u, v}).second)
        throw GameError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
      in_[v].push_back(u);
      ++out_degree_[u];
    }
    if (degree_bounded_)
      for (std::size_t v = 0; v < nodes_; ++v)
        if (in_[v].size() > 3 || out_degree_[v] > 3)
          throw GameError("node " + std::to_string(v) + " exceeds degree 3");
  }

  std::size_t num_nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Rational& kappa() const { return kappa_; }
  bool degree_bounded() const { return degree_bounded_; }
  /// Nodes u with (u, v) in E.
  const std::vector<std::size_t>& in_neighbours(std::size_t v) const { return in_.at(v); }
  std::size_t in_degree(std::size_t v) const { return in_.at(v).size(); }
  std::size_t out_degree(std::size_t v) const { return out_degree_.at(v); }

  static std::string node_id(std::size_t v) { return std::to_string(v); }

 private:
  std::size_t nodes_;
  std::vector<Edge> edges_;
  Rational kappa_;
  bool degree_bounded_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> out_degree_;
};

using Profile = std::vector<Rational>;

namespace detail {

// Distance of x from the band allowed by the neighbour sum, 0 if allowed.
inline Rational response_gap(const Rational& sum, const Rational& x, const Rational& kappa) {
  const Rational half = rational(1, 2);
  if (sum > half + kappa && x > kappa) return x - kappa;
  if (sum < half - kappa && x < 1 - kappa) return (1 - kappa) - x;
  return 0;
}

}  // namespace detail

inline Verdict verify_profile(const ThresholdGame& g, const Profile& x) {
  if (x.size() != g.num_nodes())
    throw GameError("profile has " + std::to_string(x.size()) + " values for " + std::to_string(g.num_nodes()) +
                    " nodes");
  for (std::size_t v = 0; v < x.size(); ++v)
    if (x[v] < 0 || x[v] > 1) throw GameError("profile value for node " + std::to_string(v) + " outside [0, 1]");
  Verdict out;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    Rational sum = 0;
    for (auto u : g.in_neighbours(v)) sum += x[u];
    const Rational gap = detail::response_gap(sum, x[v], g.kappa());
    if (gap != 0) out.violations.push_back({"best_response", ThresholdGame::node_id(v), gap});
  }
  return out;
}

/// First passing profile on {0, h, ..., 1}^V in lexicographic order
/// (node 0 most significant). 1/h must be a positive integer.
inline Profile solve_brute_force(const ThresholdGame& g, const Rational& h, std::size_t max_nodes = 8) {
  if (g.num_nodes() > max_nodes)
    throw GameError("brute force supports at most " + std::to_string(max_nodes) + " nodes");
  if (h <= 0 || h > 1 || h.get_num() != 1) throw GameError("grid resolution must be 1/k for a positive integer k");
  const long steps = h.get_den().get_si();
  const std::size_t n = g.num_nodes();
  // ready[i]: nodes whose condition is decided once nodes 0..i are set.
  std::vector<std::vector<std::size_t>> ready(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t last = v;
    for (auto u : g.in_neighbours(v)) last = std::max(last, u);
    ready[last].push_back(v);
  }
  Profile x(n, Rational(0));
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (long k = 0; k <= steps; ++k) {
      x[i] = Rational(k) * h;
      bool ok = true;
      for (auto v : ready[i]) {
        Rational sum = 0;
        for (auto u : g.in_neighbours(v)) sum += x[u];
        if (detail::response_gap(sum, x[v], g.kappa()) != 0) {
          ok = false;
          break;
        }
      }
      if (ok && self(self, i + 1)) return true;
    }
    return false;
  };
  if (!search(search, 0)) throw NoGridSolutionError("no passing profile on grid of step " + to_string(h));
  return x;
}

/// Text format: "N kappa" on the first line, then one "u v" edge per line
/// (0-based). Blank lines and lines starting with '#' are skipped.
inline ThresholdGame parse_threshold_game(std::istream& in, bool degree_bounded = false) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::size_t, Rational>> header;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) fail("expected two fields");
    auto index = [&](const std::string& s) -> std::size_t {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail("expected a node index, got '" + s + "'");
      return std::stoul(s);
    };
    if (!header) {
      const std::size_t nodes = index(a);
      try {
        header.emplace(nodes, parse_rational(b));
      } catch (const ParseError& e) {
        fail(e.what());
      }
    } else {
      edges.emplace_back(index(a), index(b));
    }
  }
  if (!header) throw ParseError("missing header line 'nodes kappa'");
  try {
    return ThresholdGame(header->first, std::move(edges), header->second, degree_bounded);
  } catch (const GameError& e) {
    throw ParseError(e.what());
  }
}

inline void write_threshold_game(std::ostream& out, const ThresholdGame& g) {
  out << g.num_nodes() << ' ' << to_string(g.kappa()) << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace hzlab

#pragma once

#include <array>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hzlab/rational.hpp"

namespace hzlab {

/// Literals use DIMACS signs: +i is x_i, -i is its negation (1-based).
using Clause3 = std::array<int, 3>;

struct Cnf {
  int variables = 0;
  std::vector<Clause3> clauses;
};

inline void validate_cnf(const Cnf& f) {
  if (f.variables < 1) throw ParseError("formula has no variables");
  if (f.clauses.empty()) throw ParseError("formula has no clauses");
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const auto& c = f.clauses[j];
    for (int a = 0; a < 3; ++a) {
      if (c[a] == 0 || std::abs(c[a]) > f.variables)
        throw ParseError("clause " + std::to_string(j + 1) + " references variable " + std::to_string(c[a]));
      for (int b = a + 1; b < 3; ++b)
        if (std::abs(c[a]) == std::abs(c[b]))
          throw ParseError("clause " + std::to_string(j + 1) + " repeats variable " + std::to_string(std::abs(c[a])));
    }
  }
}

/// Reads "p cnf <vars> <clauses>" followed by zero-terminated clauses of
/// exactly three literals over distinct variables. 'c' lines are comments.
inline Cnf parse_dimacs(std::istream& in) {
  Cnf f;
  std::string line;
  std::size_t line_no = 0;
  long declared = -1;
  std::vector<int> pending;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%") break;
    if (tok == "p") {
      std::string fmt;
      long vars = 0;
      if (declared >= 0) fail("duplicate problem line");
      if (!(ls >> fmt >> vars >> declared) || fmt != "cnf" || vars < 1 || declared < 1) fail("malformed problem line");
      f.variables = static_cast<int>(vars);
      continue;
    }
    if (declared < 0) fail("clause before problem line");
    do {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0') fail("malformed literal '" + tok + "'");
      if (lit == 0) {
        if (pending.size() != 3) fail("clause with " + std::to_string(pending.size()) + " literals (expected 3)");
        f.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        pending.push_back(static_cast<int>(lit));
      }
    } while (ls >> tok);
  }
  if (declared < 0) throw ParseError("missing problem line");
  if (!pending.empty()) throw ParseError("unterminated final clause");
  if (static_cast<long>(f.clauses.size()) != declared)
    throw ParseError("problem line declares " + std::to_string(declared) + " clauses, found " +
                     std::to_string(f.clauses.size()));
  validate_cnf(f);
  return f;
}

inline void write_dimacs(std::ostream& out, const Cnf& f) {
  out << "p cnf " << f.variables << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
}

inline bool satisfies(const Cnf& f, const std::vector<bool>& assignment) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int lit : c) sat |= assignment.at(std::abs(lit) - 1) == (lit > 0);
    if (!sat) return false;
  }
  return true;
}

}  // namespace hzlab

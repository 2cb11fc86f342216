#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hzlab/market.hpp"

namespace hzlab {

struct Verdict {
  std::vector<Violation> violations;

  bool pass() const { return violations.empty(); }
  bool has(const std::string& cond) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.condition == cond; });
  }
};

}  // namespace hzlab

#pragma once

// Scaled distances between exact edge-gadget allocations and their central
// predictions, plus the bounds they are pinned to.

#include <algorithm>

#include "hzlab/ppad.hpp"

namespace hzlab::sweep {

struct GadgetErrors {
  Rational first;         // m^4 |A_{e,1} share - prediction|
  Rational plateau;       // m^2 |per-agent share - 1/2 or 2/3|, transition zones excluded
  Rational second_total;  // |total - central|
  Rational third_total;
  Rational fourth_total_v1;
  Rational fourth_total_u2;
  Rational total_u;
  Rational total_v;

  void absorb(const GadgetErrors& o) {
    first = max(first, o.first);
    plateau = max(plateau, o.plateau);
    second_total = max(second_total, o.second_total);
    third_total = max(third_total, o.third_total);
    fourth_total_v1 = max(fourth_total_v1, o.fourth_total_v1);
    fourth_total_u2 = max(fourth_total_u2, o.fourth_total_u2);
    total_u = max(total_u, o.total_u);
    total_v = max(total_v, o.total_v);
  }
};

// Measured once over m in {4, 8, 16, 32} with 20 pairs each; the maxima
// were 0.119, 0.248, 3.01, 4.02, 24.0, 32.9, 37.8, 24.8.
inline GadgetErrors frozen_bounds() {
  return {rational(1, 4), rational(1, 2), Rational(6), Rational(8), Rational(36), Rational(48), Rational(60),
          Rational(48)};
}

inline bool within(const GadgetErrors& e, const GadgetErrors& b) {
  return e.first <= b.first && e.plateau <= b.plateau && e.second_total <= b.second_total &&
         e.third_total <= b.third_total && e.fourth_total_v1 <= b.fourth_total_v1 &&
         e.fourth_total_u2 <= b.fourth_total_u2 && e.total_u <= b.total_u && e.total_v <= b.total_v;
}

inline GadgetErrors gadget_errors(const Rational& pu, const Rational& pv, long m) {
  const auto meas = measure_edge_gadget(pu, pv, m);
  const auto pred = predict_edge_gadget(pu, pv, m);
  const Rational M(m), M2 = M * M, M3 = M2 * M, M4 = M3 * M;
  const Rational half = rational(1, 2), two_thirds = rational(2, 3);
  GadgetErrors e;
  e.first = M4 * max(abs(Rational(meas.first_v1 - pred.first_v1)), abs(Rational(meas.first_u3 - pred.first_u3)));
  e.plateau = 0;
  const Integer lv = floor(Rational(M3 * pv)), lu = floor(Rational(M3 * pu));
  for (long l = 1; l <= m; ++l) {
    const Integer L(l);
    const auto& s2 = meas.second_shares[l - 1];
    if (L != lv && L != lv + 1 && s2 != 0) e.plateau = max(e.plateau, Rational(M2 * abs(Rational(s2 - half))));
    const auto& s3 = meas.third_shares[l - 1];
    if (L != lu && L != lu + 1 && s3 != 0) e.plateau = max(e.plateau, Rational(M2 * abs(Rational(s3 - half))));
  }
  const Rational threshold = pv / 2 - pu / 3 + 1 / (3 * M2);
  for (long l = 1; l <= 2 * m; ++l) {
    const Rational x = Rational(l) / (2 * M3);
    if (x >= threshold + 2 / M3)
      e.plateau = max(e.plateau, Rational(M2 * abs(Rational(meas.fourth_v1[l - 1] - half))));
    if (x <= threshold)
      e.plateau = max(e.plateau, Rational(M2 * abs(Rational(meas.fourth_u2[l - 1] - two_thirds))));
  }
  e.second_total = abs(Rational(meas.second_total - pred.second_total));
  e.third_total = abs(Rational(meas.third_total - pred.third_total));
  e.fourth_total_v1 = abs(Rational(meas.fourth_total_v1 - pred.fourth_total_v1));
  e.fourth_total_u2 = abs(Rational(meas.fourth_total_u2 - pred.fourth_total_u2));
  e.total_u = abs(Rational(meas.total_u - pred.total_u));
  e.total_v = abs(Rational(meas.total_v - pred.total_v));
  return e;
}

}  // namespace hzlab::sweep

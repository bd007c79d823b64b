#pragma once

#include <cstddef>

#include "lps/errors.hpp"
#include "lps/structuring.hpp"

namespace lps {

struct ExtrinsicScores {
  double precision;
  double recall;
  double f_measure;
};

// Compares learned elementary closures against the target over the
// target's domain (partial targets score over sampled elements only).
// precision = sum |F* ∩ F_Q| / sum |F_Q|, recall = same numerator
// over sum |F*|, f = harmonic mean (0 when P + R = 0).
inline ExtrinsicScores extrinsic_measure(const Structuring& target,
                                         const Structuring& learned) {
  if (target.universe_size() != learned.universe_size())
    throw invalid_argument_error("structurings over different universes");
  std::size_t hit = 0, learned_total = 0, target_total = 0;
  target.for_each([&](std::size_t x, const ElementSet& f_star) {
    const ElementSet& f_q = learned.closure_of(x);
    hit += (f_star & f_q).count();
    learned_total += f_q.count();
    target_total += f_star.count();
  });
  ExtrinsicScores s{0.0, 0.0, 0.0};
  if (learned_total) s.precision = static_cast<double>(hit) / static_cast<double>(learned_total);
  if (target_total) s.recall = static_cast<double>(hit) / static_cast<double>(target_total);
  if (s.precision + s.recall > 0)
    s.f_measure = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace lps

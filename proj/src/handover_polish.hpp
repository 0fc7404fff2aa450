#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conntraj/geometry.hpp"
#include "conntraj/handover.hpp"

namespace conntraj::detail {

struct PolishResult {
  std::vector<Vec2> points;  // same layout as the input, projected onto the regions
  bool stationary = false;   // KKT conditions hold on the final active set
  std::size_t iterations = 0;
};

// Newton refinement of a feasible polyline. Every handover point is either
// free, on one circle (one angle) or at a lens corner; Newton steps run on
// that face, blocking constraints are added as they are hit and constraints
// with negative multipliers are dropped.
PolishResult polish_handovers(std::span<const HandoverRegion> regions, std::vector<Vec2> x,
                              double d, std::size_t max_iterations);

}  // namespace conntraj::detail

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moat/growth.hpp"

namespace moat {

using Layout = std::vector<std::pair<double, double>>;  // indexed by vertex id

// Coordinates from the instance if every vertex has one, else a circle.
Layout default_layout(const Instance& inst);

// One snapshot at time t: each directed edge is filled from its tail by the
// amount every set has contributed so far, one color per set.
std::string render_frame(const GrowthTrace& trace, const Layout& layout, const Rational& t);

}  // namespace moat

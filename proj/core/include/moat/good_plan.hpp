#pragma once

#include <string>
#include <vector>

#include "moat/instance.hpp"
#include "moat/merge_plan.hpp"

namespace moat {

struct GreedyStep {
  std::vector<std::string> terminals;  // X_i, names in G_i
  Component component;                 // K_i, ids of the graph it was found in
  Rational cost;
  Rational drop;  // drop_{G_i}(X_i)
  Rational ratio;
};

struct GreedyRun {
  Instance original;
  std::vector<GreedyStep> steps;
  // graphs[i] is G_{i+1}; graphs.front() is the input, graphs.back() the final graph.
  std::vector<Instance> graphs;
  // plans[i] is the canonical plan of graphs[i], obtained by contracting plans.front().
  std::vector<MergePlan> plans;
  // reps[i][t]: label in graphs[i] of the group holding original terminal t.
  std::vector<std::vector<std::string>> reps;
  Rational tmst;
  int cap = 0;
  // The last graph was only checked for improving components up to cap terminals.
  bool bounded = false;
};

// Min-ratio full component contraction until no component with at most cap
// terminals improves. Ties: smaller |X|, then lexicographic terminal order.
GreedyRun relative_greedy(const Instance& inst, int cap = kDefaultComponentCap);

// Step function gamma -> fraction of TMST contracted by gamma-improving components.
struct RhoFunction {
  std::vector<Rational> thresholds;  // 1 - ratio_i, non-increasing
  std::vector<Rational> fractions;   // drop_i / TMST
  Rational operator()(const Rational& gamma) const;
  // Exact integral over [lo, hi].
  Rational integral(const Rational& lo, const Rational& hi) const;
};
RhoFunction rho(const GreedyRun& run);

// a(gamma) = (7-5g)/12 and b(gamma) = (7-5g)(3-7g) / (12(9-7g)).
Rational a_of(const Rational& gamma);
Rational b_of(const Rational& gamma);

// Number of greedy steps whose component is gamma-improving.
std::size_t improving_prefix(const GreedyRun& run, const Rational& gamma);
Matrix gamma_upper_bound(const GreedyRun& run, const Rational& gamma);
MergePlan construct_gamma_plan(const GreedyRun& run, const Rational& gamma);

struct GapBound {
  Rational integral_lo, integral_hi;  // enclosure of the integral of (a - 1/2)/b over [0, 1/5]
  Rational bound_lo, bound_hi;        // 2(1 - I)
  int panels = 0;
};
GapBound gap_bound(const Rational& width = Rational(1, 1000000));

struct BestGamma {
  Rational gamma;
  Rational raw;    // a - b rho at gamma
  Rational bound;  // max(raw, 1/2)
};
BestGamma best_gamma(const RhoFunction& rho);

}  // namespace moat

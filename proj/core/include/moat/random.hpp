#pragma once

#include <cstdint>
#include <random>

#include "moat/instance.hpp"
#include "moat/merge_plan.hpp"

namespace moat {

using Rng = std::mt19937_64;

struct RandomInstanceSpec {
  int vertices = 8;
  int terminals = 3;
  int extra_edges = 4;  // on top of a random spanning tree
  int max_cost = 9;     // integer costs in [1, max_cost]
};
// Terminals are spread evenly over the vertex ids; root is the first terminal.
Instance random_instance(Rng& rng, const RandomInstanceSpec& spec);

// Random dendrogram on the labels with merge times in {0, 1/2, ..., max_half/2}.
MergePlan random_ultrametric(Rng& rng, const std::vector<std::string>& labels, int max_half = 16);
// Same, with merge times on the grid {0, max/grid, ..., max}.
MergePlan random_ultrametric(Rng& rng, const std::vector<std::string>& labels, const Rational& max, int grid);

// Terminals t0.. hang off a tree of Steiner hubs h0.. by cheap edges; extra
// edges are expensive. Steiner vertices usually pay off here.
Instance random_hub_instance(Rng& rng, const RandomInstanceSpec& spec);

std::vector<std::string> terminal_labels(const Instance& inst);

// Rejection-samples random instances until one is MST-optimal.
Instance random_mst_optimal(Rng& rng, const RandomInstanceSpec& spec, int max_tries = 10000);

}  // namespace moat

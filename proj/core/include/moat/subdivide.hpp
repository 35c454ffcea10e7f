#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moat/growth.hpp"

namespace moat {

// Result of the continuous growth variant. Indices refer to times.
struct ContinuousTrace {
  const Instance* instance = nullptr;
  MergePlan plan;
  VertexId root = -1;
  std::vector<VertexId> plan_vertex;
  std::vector<Rational> times;
  int end = 0;
  std::vector<int> directed_tight;    // per arc
  std::vector<int> undirected_tight;  // per edge
  // Total charge of each arc at the moment its edge became undirected-tight.
  std::vector<Rational> load_at_undirected_tight;
  std::vector<Rational> final_load;
  // C(S, arc) for every set S with a positive amount, when recorded.
  std::map<std::pair<int, ArcId>, Rational> contribution;
  std::vector<int> set_start, set_end;
  Rational objective;

  std::vector<int> atf_indices_for_set(int set) const;
  std::optional<Rational> atf(int set, VertexId v) const;
  Rational contribution_of(int set, ArcId a) const;
};

ContinuousTrace continuous_run(const Instance& inst, const MergePlan& plan, std::optional<VertexId> root = {},
                               bool record_contributions = true);

struct Subdivision {
  Instance instance;
  // Per original edge: vertices of the new instance from edge.u to edge.v.
  std::vector<std::vector<VertexId>> chain;
  // Per original edge: offsets of the chain vertices from edge.u.
  std::vector<std::vector<Rational>> offsets;
  std::size_t added = 0;
};

// Splits edge e at the given offsets from edge(e).u. Offsets outside (0, c)
// and duplicates are ignored. Original vertices keep their ids; a new vertex
// on edge e is named "<prefix><e>_s<i>", counted from edge(e).u.
Subdivision subdivide_edges(const Instance& inst, const std::vector<std::vector<Rational>>& splits,
                            const std::string& prefix = "e");

Subdivision make_nice(const Instance& inst, const MergePlan& plan, std::optional<VertexId> root = {});

struct WellSubdivisionReport {
  bool ok = true;
  std::vector<EdgeId> reach_violations;
  std::vector<ArcId> uniform_violations;
};
WellSubdivisionReport check_well_subdivided(const GrowthTrace& trace);

// Throws Error if the re-run does not satisfy both properties.
Subdivision make_well_subdivided(const Instance& inst, const MergePlan& plan, std::optional<VertexId> root = {},
                                 bool verify = true);

}  // namespace moat

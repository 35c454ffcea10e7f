#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "moat/growth.hpp"

namespace moat::detail {

// Shared event engine. In continuous mode an arc (v,w) is charged by every
// set whose moat holds v until {v,w} is undirected-tight; otherwise only
// arcs leaving the moat are charged.
struct EngineOptions {
  bool continuous = false;
  VertexId root = -1;
  bool stop_when_all_reach_root = false;
  std::vector<VertexId> watch;
  bool record_events = false;
  bool record_reach_events = false;
  bool record_contributions = false;
};

struct EngineResult {
  std::vector<VertexId> plan_vertex;
  int root_terminal = -1;
  std::vector<Rational> times;
  int end = 0;
  bool truncated = false;
  std::vector<GrowthEvent> events;
  std::vector<int> tight;      // per arc
  std::vector<int> und_tight;  // per edge
  std::vector<Rational> load_at_und;
  std::vector<Rational> final_load;
  std::vector<int> set_start, set_end, root_reach;
  std::vector<std::vector<int>> watch_reach;
  Rational objective;
  std::map<std::pair<int, ArcId>, Rational> contribution;
};

EngineResult run_engine(const Instance& inst, const MergePlan& plan, const EngineOptions& opt);

// Bottleneck reach indices over arcs with a finite tight index.
std::vector<int> bottleneck(const Instance& inst, std::span<const VertexId> sources, const std::vector<int>& tight,
                            std::vector<ArcId>* parent);

}  // namespace moat::detail

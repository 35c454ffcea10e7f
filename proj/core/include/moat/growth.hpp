#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "moat/instance.hpp"
#include "moat/merge_plan.hpp"

namespace moat {

struct GrowthOptions {
  // Defaults to the instance root, else the first terminal.
  std::optional<VertexId> root;
  // Stop as soon as every active set can reach the root. The objective is
  // unaffected; tightness after that moment is not recorded.
  bool stop_when_all_reach_root = false;
  // Vertices whose per-set first active reach is recorded online.
  std::vector<VertexId> watch;
  bool record_events = true;
  bool record_reach_events = false;
  bool materialize_dual = true;
};

enum class EventKind : std::uint8_t { kEdgeTight, kPartitionChange, kReach };

struct GrowthEvent {
  int time;  // index into GrowthTrace::times()
  EventKind kind;
  int a;  // arc for kEdgeTight, set for kPartitionChange and kReach
  int b;  // vertex for kReach
};

inline constexpr int kNever = std::numeric_limits<int>::max();

// Times are stored as indices into the strictly increasing event-time list;
// kNever marks "not within the run". Set ids are dendrogram node indices.
class GrowthTrace {
 public:
  const Instance& instance() const { return *inst_; }
  const MergePlan& plan() const { return plan_; }
  const Dendrogram& sets() const { return plan_.dendrogram(); }
  VertexId root() const { return root_; }
  // plan terminal index -> instance vertex
  VertexId terminal_vertex(int plan_index) const { return plan_vertex_[plan_index]; }
  int root_terminal() const { return root_terminal_; }

  const std::vector<Rational>& times() const { return times_; }
  const Rational& time(int idx) const { return times_[idx]; }
  int end_index() const { return end_; }
  bool truncated() const { return truncated_; }
  const std::vector<GrowthEvent>& events() const { return events_; }

  int tight_index(ArcId a) const { return tight_[a]; }
  std::optional<Rational> tight_time(ArcId a) const;
  int set_start(int set) const { return set_start_[set]; }
  // kNever for the final set.
  int set_end(int set) const { return set_end_[set]; }
  bool set_contains_root(int set) const;

  // Bottleneck reach times from a set of plan terminals, over tight arcs.
  std::vector<int> atf_indices(std::span<const int> terminals) const;
  std::vector<int> atf_indices_for_set(int set) const;
  // Same, plus the arc through which each vertex was first reached.
  std::vector<int> atf_with_parents(std::span<const int> terminals, std::vector<ArcId>& parent) const;
  std::optional<Rational> atf(int set, VertexId v) const;

  // atf_S(root) when S reaches the root no later than its deactivation.
  int root_reach(int set) const { return root_reach_[set]; }
  int watch_reach(int set, std::size_t watch_slot) const { return watch_reach_[set][watch_slot]; }

  // Objective integrated during the run.
  const Rational& online_objective() const { return online_objective_; }

 private:
  friend class GrowthEngine;
  const Instance* inst_ = nullptr;
  MergePlan plan_;
  VertexId root_ = -1;
  int root_terminal_ = -1;
  std::vector<VertexId> plan_vertex_;
  std::vector<Rational> times_;
  int end_ = 0;
  bool truncated_ = false;
  std::vector<GrowthEvent> events_;
  std::vector<int> tight_;
  std::vector<int> set_start_, set_end_;
  std::vector<int> root_reach_;
  std::vector<std::vector<int>> watch_reach_;
  Rational online_objective_;
};

struct DualEntry {
  std::vector<VertexId> vertices;  // sorted
  Rational y;
};

struct DualSolution {
  std::vector<DualEntry> entries;
  VertexId root = -1;
};

struct GrowthResult {
  GrowthTrace trace;
  DualSolution dual;
};

// Dual growth. The trace keeps a pointer to inst, which must outlive it.
GrowthResult run(const Instance& inst, const MergePlan& plan, const GrowthOptions& options = {});

struct FeasibilityReport {
  bool feasible = true;
  std::optional<Rational> time;
  int set = -1;
};
FeasibilityReport is_feasible_run(const GrowthTrace& trace);

Rational dual_objective(const DualSolution& d, const Instance& inst);
// Objective computed from the trace alone.
Rational dual_objective(const GrowthTrace& trace);

struct DualFeasibilityReport {
  bool feasible = true;
  std::vector<ArcId> violated;
};
DualFeasibilityReport verify_dual_feasibility(const DualSolution& d, const Instance& inst);

// Contribution of one set to one arc: the interval (start, end] of indices.
struct Contribution {
  int set;
  int start;
  int end;
};

// atf tables for every set of the dendrogram, indexed by set id.
std::vector<std::vector<int>> all_set_atf(const GrowthTrace& trace);
std::vector<Contribution> contributions(const GrowthTrace& trace, const std::vector<std::vector<int>>& atf,
                                        ArcId a);
// Total dual load on an arc at the end of the run.
Rational arc_load(const GrowthTrace& trace, const std::vector<std::vector<int>>& atf, ArcId a);

struct SafeEdgeEntry {
  ArcId arc;
  int tight;
  std::vector<int> contributors;  // sets contributing to arc or twin before tightness
  std::vector<int> maximal;       // inclusion-maximal among contributors
  bool flagged = false;           // three or more contributors
};
std::vector<SafeEdgeEntry> safe_edge_report(const GrowthTrace& trace);
// At most two contributors, at most one of them disjoint from S.
bool is_s_safe(const GrowthTrace& trace, const SafeEdgeEntry& entry, int set);

struct MeetingPoint {
  VertexId vertex;
  std::size_t position;
  bool proper;
  int atf_s_m, atf_r_m, atf_s_v, atf_r_v;
  // proper => atf_S(m) = atf_R(m) < atf_S(v)
  bool lemma_holds;
};
// Throws InvalidInput if the path is not S-tight.
std::optional<MeetingPoint> meeting_point(const GrowthTrace& trace, int set, std::span<const VertexId> path);
// Empty if v belongs to S; throws InvalidInput if v is unreachable.
std::vector<VertexId> s_tight_path(const GrowthTrace& trace, int set, VertexId v);
bool is_s_tight(const GrowthTrace& trace, const std::vector<int>& atf_s, std::span<const VertexId> path,
                int set);
Rational path_cost(const Instance& inst, std::span<const VertexId> path);

}  // namespace moat

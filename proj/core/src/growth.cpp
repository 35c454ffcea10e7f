#include "moat/growth.hpp"

#include "engine.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace moat {

class GrowthEngine {
 public:
  static GrowthTrace build(const Instance& inst, const MergePlan& plan, const GrowthOptions& opt) {
    detail::EngineOptions eo;
    eo.root = opt.root ? *opt.root : inst.root_or_first();
    eo.stop_when_all_reach_root = opt.stop_when_all_reach_root;
    eo.watch = opt.watch;
    eo.record_events = opt.record_events;
    eo.record_reach_events = opt.record_reach_events;
    auto r = detail::run_engine(inst, plan, eo);
    GrowthTrace tr;
    tr.inst_ = &inst;
    tr.plan_ = plan;
    tr.root_ = eo.root;
    tr.root_terminal_ = r.root_terminal;
    tr.plan_vertex_ = std::move(r.plan_vertex);
    tr.times_ = std::move(r.times);
    tr.end_ = r.end;
    tr.truncated_ = r.truncated;
    tr.events_ = std::move(r.events);
    tr.tight_ = std::move(r.tight);
    tr.set_start_ = std::move(r.set_start);
    tr.set_end_ = std::move(r.set_end);
    tr.root_reach_ = std::move(r.root_reach);
    tr.watch_reach_ = std::move(r.watch_reach);
    tr.online_objective_ = std::move(r.objective);
    return tr;
  }
};

std::optional<Rational> GrowthTrace::tight_time(ArcId a) const {
  if (tight_[a] == kNever) return std::nullopt;
  return times_[tight_[a]];
}

bool GrowthTrace::set_contains_root(int set) const {
  const auto& m = sets().sets[set].members;
  return std::binary_search(m.begin(), m.end(), root_terminal_);
}

std::vector<int> GrowthTrace::atf_with_parents(std::span<const int> terminals, std::vector<ArcId>& parent) const {
  std::vector<VertexId> src;
  for (int t : terminals) src.push_back(plan_vertex_[t]);
  return detail::bottleneck(*inst_, src, tight_, &parent);
}

std::vector<int> GrowthTrace::atf_indices(std::span<const int> terminals) const {
  std::vector<VertexId> src;
  for (int t : terminals) src.push_back(plan_vertex_[t]);
  return detail::bottleneck(*inst_, src, tight_, nullptr);
}

std::vector<int> GrowthTrace::atf_indices_for_set(int set) const {
  return atf_indices(sets().sets[set].members);
}

std::optional<Rational> GrowthTrace::atf(int set, VertexId v) const {
  int i = atf_indices_for_set(set)[v];
  if (i == kNever) return std::nullopt;
  return times_[i];
}

namespace {

DualSolution materialize(const GrowthTrace& tr) {
  DualSolution dual;
  dual.root = tr.root();
  const Dendrogram& d = tr.sets();
  std::map<std::vector<VertexId>, Rational> acc;
  std::size_t n = tr.instance().num_vertices();
  for (std::size_t s = 0; s < d.sets.size(); ++s) {
    if (int(s) == d.top) continue;
    int a = tr.set_start(int(s));
    int e = std::min(tr.set_end(int(s)), tr.end_index());
    if (a >= e) continue;
    auto atf = tr.atf_indices_for_set(int(s));
    std::vector<std::pair<int, VertexId>> order;
    for (std::size_t v = 0; v < n; ++v)
      if (atf[v] < e) order.emplace_back(atf[v], VertexId(v));
    std::sort(order.begin(), order.end());
    std::vector<VertexId> U;
    std::size_t p = 0;
    int i = a;
    while (i < e) {
      while (p < order.size() && order[p].first <= i) U.push_back(order[p++].second);
      int j = p < order.size() ? std::min(order[p].first, e) : e;
      std::vector<VertexId> key = U;
      std::sort(key.begin(), key.end());
      acc[key] += tr.time(j) - tr.time(i);
      i = j;
    }
  }
  for (auto& [U, y] : acc)
    if (y.sign() > 0) dual.entries.push_back(DualEntry{U, y});
  return dual;
}

}  // namespace

GrowthResult run(const Instance& inst, const MergePlan& plan, const GrowthOptions& options) {
  GrowthResult res{GrowthEngine::build(inst, plan, options), {}};
  res.dual.root = res.trace.root();
  if (options.materialize_dual && !res.trace.truncated()) res.dual = materialize(res.trace);
  return res;
}

FeasibilityReport is_feasible_run(const GrowthTrace& trace) {
  FeasibilityReport rep;
  const Dendrogram& d = trace.sets();
  for (std::size_t s = 0; s < d.sets.size(); ++s) {
    if (int(s) == d.top || trace.set_contains_root(int(s))) continue;
    int a = trace.set_start(int(s));
    int e = std::min(trace.set_end(int(s)), trace.end_index());
    if (a >= e) continue;
    int rr = trace.root_reach(int(s));
    if (rr < e) {
      if (rep.feasible || trace.time(std::max(rr, a)) < *rep.time) {
        rep.feasible = false;
        rep.time = trace.time(std::max(rr, a));
        rep.set = int(s);
      }
    }
  }
  return rep;
}

Rational dual_objective(const DualSolution& d, const Instance& inst) {
  Rational total;
  for (const auto& e : d.entries) {
    bool has_root = std::binary_search(e.vertices.begin(), e.vertices.end(), d.root);
    bool has_terminal = false;
    for (VertexId v : e.vertices) has_terminal |= inst.is_terminal(v);
    if (!has_root && has_terminal) total += e.y;
  }
  return total;
}

Rational dual_objective(const GrowthTrace& trace) {
  Rational total;
  const Dendrogram& d = trace.sets();
  for (std::size_t s = 0; s < d.sets.size(); ++s) {
    if (int(s) == d.top || trace.set_contains_root(int(s))) continue;
    int a = trace.set_start(int(s));
    int e = std::min({trace.set_end(int(s)), trace.end_index(), trace.root_reach(int(s))});
    if (a < e) total += trace.time(e) - trace.time(a);
  }
  return total;
}

DualFeasibilityReport verify_dual_feasibility(const DualSolution& d, const Instance& inst) {
  std::vector<Rational> load(inst.num_arcs());
  std::vector<char> in(inst.num_vertices(), 0);
  for (const auto& e : d.entries) {
    for (VertexId v : e.vertices) in[v] = 1;
    for (VertexId v : e.vertices)
      for (const Arc& arc : inst.out_arcs(v))
        if (!in[arc.head]) load[arc.id] += e.y;
    for (VertexId v : e.vertices) in[v] = 0;
  }
  DualFeasibilityReport rep;
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a)
    if (load[a] > inst.cost(a)) {
      rep.feasible = false;
      rep.violated.push_back(a);
    }
  return rep;
}

std::vector<std::vector<int>> all_set_atf(const GrowthTrace& trace) {
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < trace.sets().sets.size(); ++s) out.push_back(trace.atf_indices_for_set(int(s)));
  return out;
}

std::vector<Contribution> contributions(const GrowthTrace& trace, const std::vector<std::vector<int>>& atf,
                                        ArcId a) {
  std::vector<Contribution> out;
  const Instance& inst = trace.instance();
  VertexId v = inst.tail(a), w = inst.head(a);
  const Dendrogram& d = trace.sets();
  for (std::size_t s = 0; s < d.sets.size(); ++s) {
    if (int(s) == d.top) continue;
    int start = std::max(trace.set_start(int(s)), atf[s][v]);
    int end = std::min({trace.set_end(int(s)), atf[s][w], trace.end_index()});
    if (start < end) out.push_back(Contribution{int(s), start, end});
  }
  return out;
}

Rational arc_load(const GrowthTrace& trace, const std::vector<std::vector<int>>& atf, ArcId a) {
  Rational total;
  for (const auto& c : contributions(trace, atf, a)) total += trace.time(c.end) - trace.time(c.start);
  return total;
}

std::vector<SafeEdgeEntry> safe_edge_report(const GrowthTrace& trace) {
  auto atf = all_set_atf(trace);
  const Instance& inst = trace.instance();
  const Dendrogram& d = trace.sets();
  std::vector<SafeEdgeEntry> out;
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a) {
    int t = trace.tight_index(a);
    if (t == kNever) continue;
    SafeEdgeEntry e{a, t, {}, {}, false};
    for (ArcId b : {a, twin(a)})
      for (const auto& c : contributions(trace, atf, b))
        if (c.start < t) e.contributors.push_back(c.set);
    std::sort(e.contributors.begin(), e.contributors.end());
    e.contributors.erase(std::unique(e.contributors.begin(), e.contributors.end()), e.contributors.end());
    for (int s : e.contributors) {
      bool dominated = false;
      for (int o : e.contributors) {
        if (o == s) continue;
        const auto& big = d.sets[o].members;
        const auto& small = d.sets[s].members;
        if (big.size() > small.size() && std::includes(big.begin(), big.end(), small.begin(), small.end()))
          dominated = true;
      }
      if (!dominated) e.maximal.push_back(s);
    }
    e.flagged = e.contributors.size() >= 3;
    out.push_back(std::move(e));
  }
  return out;
}

bool is_s_safe(const GrowthTrace& trace, const SafeEdgeEntry& entry, int set) {
  if (entry.contributors.size() > 2) return false;
  const auto& S = trace.sets().sets[set].members;
  int outside = 0;
  for (int c : entry.contributors) {
    const auto& m = trace.sets().sets[c].members;
    bool disjoint = true;
    for (int x : m) disjoint &= !std::binary_search(S.begin(), S.end(), x);
    outside += disjoint;
  }
  return outside <= 1;
}

namespace {

std::optional<ArcId> arc_between(const Instance& inst, VertexId u, VertexId v) {
  for (const Arc& a : inst.out_arcs(u))
    if (a.head == v) return a.id;
  return std::nullopt;
}

}  // namespace

bool is_s_tight(const GrowthTrace& trace, const std::vector<int>& atf_s, std::span<const VertexId> path, int set) {
  if (path.empty()) return false;
  int t0 = trace.instance().terminal_index(path[0]);
  if (t0 < 0) return false;
  int pi = -1;
  for (std::size_t i = 0; i < trace.plan().size(); ++i)
    if (trace.terminal_vertex(int(i)) == path[0]) pi = int(i);
  const auto& S = trace.sets().sets[set].members;
  if (pi < 0 || !std::binary_search(S.begin(), S.end(), pi)) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto a = arc_between(trace.instance(), path[i], path[i + 1]);
    if (!a) return false;
    int h = atf_s[path[i + 1]];
    if (h == kNever || atf_s[path[i]] > h || trace.tight_index(*a) > h) return false;
  }
  return true;
}

std::optional<MeetingPoint> meeting_point(const GrowthTrace& trace, int set, std::span<const VertexId> path) {
  auto atf_s = trace.atf_indices_for_set(set);
  if (!is_s_tight(trace, atf_s, path, set)) throw InvalidInput("path is not S-tight");
  const auto& S = trace.sets().sets[set].members;
  std::vector<int> comp, all;
  for (int i = 0; i < int(trace.plan().size()); ++i) {
    all.push_back(i);
    if (!std::binary_search(S.begin(), S.end(), i)) comp.push_back(i);
  }
  auto atf_c = trace.atf_indices(comp);
  auto atf_r = trace.atf_indices(all);
  for (std::size_t i = 0; i < path.size(); ++i) {
    VertexId m = path[i];
    if (atf_c[m] <= atf_s[m]) {
      MeetingPoint mp;
      mp.vertex = m;
      mp.position = i;
      mp.proper = i + 1 < path.size();
      mp.atf_s_m = atf_s[m];
      mp.atf_r_m = atf_r[m];
      mp.atf_s_v = atf_s[path.back()];
      mp.atf_r_v = atf_r[path.back()];
      mp.lemma_holds = !mp.proper || (mp.atf_s_m == mp.atf_r_m && mp.atf_r_m < mp.atf_s_v);
      return mp;
    }
  }
  return std::nullopt;
}

std::vector<VertexId> s_tight_path(const GrowthTrace& trace, int set, VertexId v) {
  const auto& S = trace.sets().sets[set].members;
  for (int x : S)
    if (trace.terminal_vertex(x) == v) return {};
  std::vector<ArcId> parent;
  auto atf = trace.atf_with_parents(S, parent);
  if (atf[v] == kNever) throw InvalidInput("vertex not reachable from the set");
  std::vector<VertexId> path{v};
  VertexId cur = v;
  while (parent[cur] >= 0) {
    cur = trace.instance().tail(parent[cur]);
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Rational path_cost(const Instance& inst, std::span<const VertexId> path) {
  Rational total;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto a = arc_between(inst, path[i], path[i + 1]);
    if (!a) throw InvalidInput("path uses a missing edge");
    total += inst.cost(*a);
  }
  return total;
}

}  // namespace moat

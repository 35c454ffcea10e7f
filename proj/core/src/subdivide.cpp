#include "moat/subdivide.hpp"

#include <algorithm>

#include "engine.hpp"

namespace moat {

std::vector<int> ContinuousTrace::atf_indices_for_set(int set) const {
  std::vector<VertexId> src;
  for (int t : plan.dendrogram().sets[set].members) src.push_back(plan_vertex[t]);
  return detail::bottleneck(*instance, src, directed_tight, nullptr);
}

std::optional<Rational> ContinuousTrace::atf(int set, VertexId v) const {
  int i = atf_indices_for_set(set)[v];
  if (i == kNever) return std::nullopt;
  return times[i];
}

Rational ContinuousTrace::contribution_of(int set, ArcId a) const {
  auto it = contribution.find({set, a});
  return it == contribution.end() ? Rational(0) : it->second;
}

ContinuousTrace continuous_run(const Instance& inst, const MergePlan& plan, std::optional<VertexId> root,
                               bool record_contributions) {
  detail::EngineOptions eo;
  eo.continuous = true;
  eo.root = root ? *root : inst.root_or_first();
  eo.record_contributions = record_contributions;
  auto r = detail::run_engine(inst, plan, eo);
  ContinuousTrace ct;
  ct.instance = &inst;
  ct.plan = plan;
  ct.root = eo.root;
  ct.plan_vertex = std::move(r.plan_vertex);
  ct.times = std::move(r.times);
  ct.end = r.end;
  ct.directed_tight = std::move(r.tight);
  ct.undirected_tight = std::move(r.und_tight);
  ct.load_at_undirected_tight = std::move(r.load_at_und);
  ct.final_load = std::move(r.final_load);
  ct.contribution = std::move(r.contribution);
  ct.set_start = std::move(r.set_start);
  ct.set_end = std::move(r.set_end);
  ct.objective = std::move(r.objective);
  return ct;
}

Subdivision subdivide_edges(const Instance& inst, const std::vector<std::vector<Rational>>& splits,
                            const std::string& prefix) {
  InstanceBuilder b;
  for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v) b.add_vertex(inst.name(v));
  Subdivision out;
  out.chain.resize(inst.num_edges());
  out.offsets.resize(inst.num_edges());
  auto layout = inst.layout();
  bool has_layout = !layout.empty();
  for (EdgeId e = 0; e < EdgeId(inst.num_edges()); ++e) {
    const Edge& edge = inst.edge(e);
    std::vector<Rational> pos;
    if (std::size_t(e) < splits.size())
      for (const Rational& p : splits[e])
        if (p.sign() > 0 && p < edge.cost) pos.push_back(p);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    out.chain[e].push_back(edge.u);
    out.offsets[e].push_back(Rational(0));
    VertexId prev = edge.u;
    Rational prev_pos(0);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      std::string name = prefix + std::to_string(e) + "_s" + std::to_string(i);
      if (b.has_vertex(name)) throw InvalidInput("subdivision vertex name '" + name + "' already in use");
      VertexId x = b.add_vertex(name);
      b.add_edge(prev, x, pos[i] - prev_pos);
      if (has_layout) {
        auto pu = layout.find(inst.name(edge.u)), pv = layout.find(inst.name(edge.v));
        if (pu != layout.end() && pv != layout.end()) {
          double f = (pos[i] / edge.cost).to_double();
          layout[name] = {pu->second.first + f * (pv->second.first - pu->second.first),
                          pu->second.second + f * (pv->second.second - pu->second.second)};
        }
      }
      out.chain[e].push_back(x);
      out.offsets[e].push_back(pos[i]);
      prev = x;
      prev_pos = pos[i];
    }
    b.add_edge(prev, edge.v, edge.cost - prev_pos);
    out.chain[e].push_back(edge.v);
    out.offsets[e].push_back(edge.cost);
    out.added += pos.size();
  }
  for (VertexId t : inst.terminals()) b.add_terminal(t);
  b.set_root(inst.root());
  out.instance = b.build();
  if (has_layout) out.instance.set_layout(std::move(layout));
  return out;
}

namespace {

std::vector<std::vector<Rational>> nice_splits(const Instance& inst, const MergePlan& plan,
                                               std::optional<VertexId> root) {
  auto ct = continuous_run(inst, plan, root, false);
  std::vector<std::vector<Rational>> splits(inst.num_edges());
  for (EdgeId e = 0; e < EdgeId(inst.num_edges()); ++e) {
    const Rational& c = inst.edge(e).cost;
    if (ct.undirected_tight[e] != kNever) {
      splits[e].push_back(ct.load_at_undirected_tight[2 * e]);
      continue;
    }
    const Rational& A = ct.final_load[2 * e];
    const Rational& B = ct.final_load[2 * e + 1];
    if (A.is_zero() && B.is_zero()) continue;
    splits[e].push_back(A + (c - A - B) / Rational(2));
  }
  return splits;
}

}  // namespace

Subdivision make_nice(const Instance& inst, const MergePlan& plan, std::optional<VertexId> root) {
  return subdivide_edges(inst, nice_splits(inst, plan, root));
}

WellSubdivisionReport check_well_subdivided(const GrowthTrace& tr) {
  WellSubdivisionReport rep;
  const Instance& inst = tr.instance();
  std::vector<int> all(tr.plan().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
  auto reach = tr.atf_indices(all);
  for (EdgeId e = 0; e < EdgeId(inst.num_edges()); ++e) {
    int both = std::max(reach[inst.edge(e).u], reach[inst.edge(e).v]);
    if (both == kNever) continue;
    if (std::min(tr.tight_index(2 * e), tr.tight_index(2 * e + 1)) > both) rep.reach_violations.push_back(e);
  }
  auto atf = all_set_atf(tr);
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a) {
    auto cs = contributions(tr, atf, a);
    if (cs.empty()) continue;
    bool uniform = true;
    for (const auto& c : cs) uniform &= c.start == cs[0].start && c.end == cs[0].end;
    if (!uniform || cs[0].end != tr.tight_index(a)) rep.uniform_violations.push_back(a);
  }
  rep.ok = rep.reach_violations.empty() && rep.uniform_violations.empty();
  return rep;
}

Subdivision make_well_subdivided(const Instance& inst, const MergePlan& plan, std::optional<VertexId> root,
                                 bool verify) {
  auto splits = nice_splits(inst, plan, root);
  Subdivision nice = subdivide_edges(inst, splits);
  GrowthOptions go;
  go.root = root;
  go.record_events = false;
  go.materialize_dual = false;
  auto res = run(nice.instance, plan, go);
  const GrowthTrace& tr = res.trace;
  auto atf = all_set_atf(tr);
  const Instance& ni = nice.instance;
  for (EdgeId e = 0; e < EdgeId(inst.num_edges()); ++e) {
    const auto& chain = nice.chain[e];
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const Rational& base = nice.offsets[e][i];
      auto pe = ni.find_edge(chain[i], chain[i + 1]);
      if (!pe) throw Error("subdivision lost an edge");
      ArcId fwd = ni.edge(*pe).u == chain[i] ? 2 * *pe : 2 * *pe + 1;
      const Rational& len = ni.cost(fwd);
      for (ArcId a : {fwd, twin(fwd)}) {
        auto cs = contributions(tr, atf, a);
        std::vector<int> marks;
        for (const auto& c : cs) {
          marks.push_back(c.start);
          marks.push_back(c.end);
        }
        for (int m : marks) {
          Rational L;
          for (const auto& c : cs)
            if (c.start < m) L += tr.time(std::min(c.end, m)) - tr.time(c.start);
          Rational p = a == fwd ? L : len - L;
          if (p.sign() > 0 && p < len) splits[e].push_back(base + p);
        }
      }
    }
  }
  Subdivision out = subdivide_edges(inst, splits);
  if (verify) {
    auto check = run(out.instance, plan, go);
    auto rep = check_well_subdivided(check.trace);
    if (!rep.ok) throw Error("well-subdivision verification failed");
  }
  return out;
}

}  // namespace moat

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "moat/subdivide.hpp"

using namespace moat;
using testing::make_instance;
using testing::q;

namespace {

Instance order_sensitive() {
  return make_instance({{"s1", "v", q(18)}, {"s2", "x", q(18)}, {"s2", "z", q(18)}, {"v", "x", q(2)}, {"x", "z", q(4)}},
                       {"s1", "s2"}, "s1");
}

Instance random_instance(std::mt19937_64& rng, int n, int k, int extra) {
  InstanceBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  std::uniform_int_distribution<int> cost(1, 9);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    b.add_edge(VertexId(i), VertexId(pick(rng)), Rational(cost(rng)));
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int e = 0; e < extra; ++e) b.add_edge(VertexId(any(rng)), VertexId(any(rng)), Rational(cost(rng)));
  for (int i = 0; i < k; ++i) b.add_terminal(VertexId(i * (n / k)));
  return b.build();
}

MergePlan random_plan(std::mt19937_64& rng, const Instance& inst) {
  std::vector<std::string> labels;
  for (VertexId t : inst.terminals()) labels.push_back(inst.name(t));
  std::uniform_int_distribution<int> w(1, 16);
  Matrix u(labels.size(), std::vector<Rational>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) u[i][j] = u[j][i] = Rational(w(rng), 2);
  return from_upper_bound(labels, u);
}

ArcId arc_of(const Instance& inst, const std::string& a, const std::string& b) {
  VertexId u = inst.id(a), v = inst.id(b);
  EdgeId e = *inst.find_edge(u, v);
  return inst.edge(e).u == u ? 2 * e : 2 * e + 1;
}

}  // namespace

TEST_CASE("subdivide: order-sensitive instance: continuous growth and the two inserted vertices") {
  auto inst = order_sensitive();
  auto plan = testing::pair_plan("s1", "s2", q(133, 6));
  auto ct = continuous_run(inst, plan);
  int s1 = plan.index("s1");
  CHECK(ct.atf(s1, inst.id("z")) == q(22));
  EdgeId vx = *inst.find_edge(inst.id("v"), inst.id("x"));
  EdgeId xz = *inst.find_edge(inst.id("x"), inst.id("z"));
  CHECK(ct.times[ct.undirected_tight[vx]] == q(19));
  CHECK(ct.times[ct.undirected_tight[xz]] == q(20));

  auto nice = make_nice(inst, plan);
  CHECK(nice.added == 2);
  CHECK(nice.chain[vx].size() == 3);
  CHECK(nice.offsets[vx][1] == q(1));
  CHECK(nice.chain[xz].size() == 3);
  CHECK(nice.offsets[xz][1] == q(2));

  auto res = run(nice.instance, plan);
  CHECK(res.trace.atf(s1, nice.instance.id("z")) == q(22));
  CHECK(check_well_subdivided(res.trace).reach_violations.empty());

  // Without subdivision the discrete run lets s1 reach z later.
  auto plain = run(inst, plan);
  CHECK(plain.trace.atf(s1, inst.id("z")) != q(22));
}

TEST_CASE("subdivide: one terminal behaves like the discrete run") {
  auto inst = make_instance({{"a", "b", q(2)}}, {"a"});
  auto ct = continuous_run(inst, MergePlan::trivial({"a"}));
  CHECK(ct.end == 0);
  CHECK(ct.objective == 0);
  CHECK(make_nice(inst, MergePlan::trivial({"a"})).added == 0);
}

TEST_CASE("subdivide: an edge nobody reaches stays whole") {
  auto inst = make_instance({{"a", "b", q(2)}, {"b", "c", q(50)}, {"c", "d", q(7)}}, {"a", "b"}, "a");
  auto nice = make_nice(inst, testing::pair_plan("a", "b", q(1)));
  EdgeId cd = *inst.find_edge(inst.id("c"), inst.id("d"));
  CHECK(nice.chain[cd].size() == 2);
}

TEST_CASE("subdivide: naming and offsets") {
  auto inst = make_instance({{"a", "b", q(3)}}, {"a", "b"});
  auto s = subdivide_edges(inst, {{q(1), q(2), q(0), q(3), q(1)}});
  CHECK(s.added == 2);
  CHECK(s.instance.find("e0_s0").has_value());
  CHECK(s.instance.find("e0_s1").has_value());
  CHECK(shortest_distance(s.instance, s.instance.id("a"), s.instance.id("e0_s0")) == q(1));
  CHECK(tmst(s.instance).cost == q(3));
  CHECK_THROWS_AS(subdivide_edges(s.instance, {{q(1, 2)}, {}, {}}, "e"), InvalidInput);
}

TEST_CASE("subdivide: continuous contributions obey the single-split identities in aggregate") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 25; ++it) {
    auto inst = random_instance(rng, 8, 3, 4);
    auto plan = random_plan(rng, inst);
    EdgeId e = EdgeId(rng() % inst.num_edges());
    const Rational& c = inst.edge(e).cost;
    Rational cu = c * Rational(1 + int(rng() % 5), 6);
    std::vector<std::vector<Rational>> splits(inst.num_edges());
    splits[e].push_back(cu);
    auto sub = subdivide_edges(inst, splits, "p");
    const Instance& si = sub.instance;
    auto ct = continuous_run(inst, plan);
    auto cs = continuous_run(si, plan);
    CHECK(ct.objective == cs.objective);
    VertexId u = inst.edge(e).u, w = inst.edge(e).v, v = sub.chain[e][1];
    auto arc = [&](VertexId a, VertexId b) {
      EdgeId x = *si.find_edge(a, b);
      return si.edge(x).u == a ? 2 * x : 2 * x + 1;
    };
    Rational cw = c - cu;
    Rational fwd, bwd, uv, vw, wv, vu;
    for (std::size_t s = 0; s < plan.dendrogram().sets.size(); ++s) {
      int S = int(s);
      fwd += ct.contribution_of(S, 2 * e);
      bwd += ct.contribution_of(S, 2 * e + 1);
      uv += cs.contribution_of(S, arc(u, v));
      vw += cs.contribution_of(S, arc(v, w));
      wv += cs.contribution_of(S, arc(w, v));
      vu += cs.contribution_of(S, arc(v, u));
    }
    CHECK(uv == std::min(fwd, cu));
    CHECK(vw == std::max(fwd - cu, Rational(0)));
    CHECK(wv == std::min(bwd, cw));
    CHECK(vu == std::max(bwd - cw, Rational(0)));
    for (std::size_t s = 0; s < plan.dendrogram().sets.size(); ++s) {
      int S = int(s);
      for (EdgeId f = 0; f < EdgeId(inst.num_edges()); ++f) {
        if (f == e) continue;
        VertexId a = inst.edge(f).u, b = inst.edge(f).v;
        CHECK(cs.contribution_of(S, arc(a, b)) == ct.contribution_of(S, 2 * f));
        CHECK(cs.contribution_of(S, arc(b, a)) == ct.contribution_of(S, 2 * f + 1));
      }
    }
  }
}

TEST_CASE("subdivide: nice instances reproduce the continuous run") {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 25; ++it) {
    auto inst = random_instance(rng, 9, 2 + it % 3, 5);
    auto plan = random_plan(rng, inst);
    auto ct = continuous_run(inst, plan, std::nullopt, false);
    auto nice = make_nice(inst, plan);
    GrowthOptions o;
    o.materialize_dual = false;
    auto res = run(nice.instance, plan, o);
    CHECK(res.trace.online_objective() == ct.objective);
    CHECK(check_well_subdivided(res.trace).reach_violations.empty());
    for (std::size_t s = 0; s < plan.dendrogram().sets.size(); ++s) {
      auto a = ct.atf_indices_for_set(int(s));
      auto b = res.trace.atf_indices_for_set(int(s));
      for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v) {
        bool fa = a[v] != kNever, fb = b[v] != kNever;
        REQUIRE(fa == fb);
        if (fa) CHECK(ct.times[a[v]] == res.trace.time(b[v]));
      }
    }
  }
}

TEST_CASE("subdivide: well-subdivided outputs are stable") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 20; ++it) {
    auto inst = random_instance(rng, 8, 2 + it % 3, 4);
    auto plan = random_plan(rng, inst);
    auto ws = make_well_subdivided(inst, plan);
    auto res = run(ws.instance, plan);
    CHECK(check_well_subdivided(res.trace).ok);
    CHECK(tmst(ws.instance).cost == tmst(inst).cost);
    auto again = make_well_subdivided(ws.instance, plan);
    CHECK(again.added == 0);

    std::vector<std::vector<Rational>> splits(ws.instance.num_edges());
    for (EdgeId e = 0; e < EdgeId(ws.instance.num_edges()); ++e)
      if (rng() % 3 == 0) splits[e].push_back(ws.instance.edge(e).cost * Rational(1 + int(rng() % 4), 5));
    auto further = subdivide_edges(ws.instance, splits, "r");
    auto res2 = run(further.instance, plan);
    CHECK(res2.trace.online_objective() == res.trace.online_objective());
    for (std::size_t s = 0; s < plan.dendrogram().sets.size(); ++s)
      for (VertexId v = 0; v < VertexId(ws.instance.num_vertices()); ++v)
        CHECK(res.trace.atf(int(s), v) == res2.trace.atf(int(s), v));
  }
}

TEST_CASE("subdivide: two sets on one arc: contributions split evenly") {
  auto inst = make_instance({{"s1", "m", q(6)}, {"m", "s2", q(6)}, {"m", "v", q(2)}}, {"s1", "s2"}, "s1");
  auto plan = testing::pair_plan("s1", "s2", q(7));
  auto ct = continuous_run(inst, plan);
  ArcId mv = arc_of(inst, "m", "v");
  CHECK(ct.contribution_of(plan.index("s1"), mv) == q(1));
  CHECK(ct.contribution_of(plan.index("s2"), mv) == q(1));
}

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "moat/growth.hpp"

using namespace moat;
using testing::make_instance;
using testing::q;

namespace {

// Straightforward dual growth: recompute every moat by BFS at every event.
struct NaiveRun {
  std::vector<std::optional<Rational>> tight;
  Rational objective;
  std::vector<Rational> load;
};

NaiveRun naive_growth(const Instance& inst, const MergePlan& plan, VertexId root) {
  std::size_t arcs = inst.num_arcs();
  NaiveRun out{std::vector<std::optional<Rational>>(arcs), Rational(0), std::vector<Rational>(arcs)};
  std::vector<VertexId> tv;
  for (const auto& l : plan.labels()) tv.push_back(inst.id(l));
  std::set<Rational> merges;
  for (std::size_t i = 0; i < plan.size(); ++i)
    for (std::size_t j = 0; j < plan.size(); ++j) merges.insert(plan.time(i, j));
  Rational t(0);
  for (int guard = 0; guard < 100000; ++guard) {
    // Parts active just after t.
    auto parts = partition_at(plan, t + Rational(1, 1000000));
    Rational probe = t;
    for (const Rational& m : merges)
      if (m > t) {
        probe = (t + m) / Rational(2);
        break;
      }
    if (probe != t) parts = partition_at(plan, probe);
    if (parts.size() <= 1) break;
    std::vector<std::vector<char>> moats;
    for (const auto& p : parts) {
      std::vector<char> in(inst.num_vertices(), 0);
      std::vector<VertexId> st;
      for (int x : p) {
        in[tv[x]] = 1;
        st.push_back(tv[x]);
      }
      while (!st.empty()) {
        VertexId v = st.back();
        st.pop_back();
        for (const Arc& a : inst.out_arcs(v))
          if (out.tight[a.id] && !in[a.head]) {
            in[a.head] = 1;
            st.push_back(a.head);
          }
      }
      moats.push_back(std::move(in));
    }
    std::vector<int> rate(arcs, 0);
    int growing = 0;
    for (const auto& m : moats) {
      if (!m[root]) ++growing;
      for (ArcId a = 0; a < ArcId(arcs); ++a)
        if (m[inst.tail(a)] && !m[inst.head(a)]) ++rate[a];
    }
    std::optional<Rational> next;
    for (const Rational& m : merges)
      if (m > t) {
        next = m;
        break;
      }
    for (ArcId a = 0; a < ArcId(arcs); ++a)
      if (rate[a] > 0 && !out.tight[a]) {
        Rational cand = t + (inst.cost(a) - out.load[a]) / Rational(rate[a]);
        if (!next || cand < *next) next = cand;
      }
    REQUIRE(next.has_value());
    Rational dt = *next - t;
    out.objective += dt * Rational(growing);
    for (ArcId a = 0; a < ArcId(arcs); ++a)
      if (!out.tight[a]) {
        out.load[a] += dt * Rational(rate[a]);
        if (out.load[a] == inst.cost(a)) out.tight[a] = *next;
      }
    t = *next;
  }
  return out;
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
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < k; ++i) b.add_terminal(VertexId(perm[i]));
  return b.build();
}

MergePlan random_plan(std::mt19937_64& rng, const Instance& inst) {
  std::vector<std::string> labels;
  for (VertexId t : inst.terminals()) labels.push_back(inst.name(t));
  std::uniform_int_distribution<int> w(0, 12);
  Matrix u(labels.size(), std::vector<Rational>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) u[i][j] = u[j][i] = Rational(w(rng), 2);
  return from_upper_bound(labels, u);
}

Instance late_arrival() {
  return make_instance({{"s2", "A1", q(17)},
                        {"s2", "A2", q(18)},
                        {"s2", "A3", q(19)},
                        {"A1", "m", q(1)},
                        {"A1", "B2", q(2)},
                        {"A2", "B2", q(1)},
                        {"A2", "B3", q(2)},
                        {"A3", "B3", q(1)},
                        {"A3", "v", q(2)},
                        {"m", "s1", q(18)}},
                       {"s1", "s2"}, "s1");
}

Instance shared_arc() {
  return make_instance({{"s1", "m", q(6)}, {"m", "s2", q(6)}, {"m", "v", q(2)}}, {"s1", "s2"}, "s1");
}

Instance meeting_example() {
  return make_instance({{"s1", "A0", q(10)},
                        {"A0", "m1", q(2)},
                        {"m1", "A1", q(1)},
                        {"s2", "A4", q(10)},
                        {"A4", "A1", q(1)},
                        {"A1", "m2", q(2)},
                        {"m2", "v", q(2)}},
                       {"s1", "s2"}, "s1");
}

int leaf_of(const GrowthTrace& tr, const std::string& label) { return tr.plan().index(label); }

}  // namespace

TEST_CASE("growth: single terminal terminates immediately") {
  auto inst = make_instance({{"a", "b", q(3)}}, {"a"});
  auto res = run(inst, MergePlan::trivial({"a"}));
  CHECK(res.trace.end_index() == 0);
  CHECK(dual_objective(res.dual, inst) == 0);
  CHECK(res.trace.online_objective() == 0);
}

TEST_CASE("growth: merge at time zero is vacuously feasible") {
  auto inst = shared_arc();
  auto res = run(inst, testing::pair_plan("s1", "s2", q(0)));
  CHECK(is_feasible_run(res.trace).feasible);
  CHECK(dual_objective(res.trace) == 0);
}

TEST_CASE("growth: late arrival at v") {
  auto inst = late_arrival();
  auto res = run(inst, testing::pair_plan("s1", "s2", q(21)));
  const auto& tr = res.trace;
  int s1 = leaf_of(tr, "s1");
  CHECK(tr.atf(s1, inst.id("v")) == q(21));
  CHECK(shortest_distance(inst, inst.id("s1"), inst.id("v")) == q(27));
  auto path = s_tight_path(tr, s1, inst.id("v"));
  REQUIRE(path.size() >= 2);
  CHECK(path.front() == inst.id("s1"));
  CHECK(path.back() == inst.id("v"));
  CHECK(path_cost(inst, path) == q(27));
  CHECK(is_s_tight(tr, tr.atf_indices_for_set(s1), path, s1));
  CHECK(s_tight_path(tr, s1, inst.id("s1")).empty());
}

TEST_CASE("growth: both sets contribute to (m,v)") {
  auto inst = shared_arc();
  auto res = run(inst, testing::pair_plan("s1", "s2", q(7)));
  const auto& tr = res.trace;
  auto e = inst.find_edge(inst.id("m"), inst.id("v"));
  REQUIRE(e);
  ArcId mv = inst.edge(*e).u == inst.id("m") ? 2 * *e : 2 * *e + 1;
  CHECK(tr.tight_time(mv) == q(7));
  auto atf = all_set_atf(tr);
  auto c = contributions(tr, atf, mv);
  CHECK(c.size() == 2);
  for (const auto& x : c) CHECK(tr.time(x.end) - tr.time(x.start) == q(1));
  CHECK(arc_load(tr, atf, mv) == q(2));
  for (const auto& s : safe_edge_report(tr)) CHECK_FALSE(s.flagged);
}

TEST_CASE("growth: meeting point example") {
  auto inst = meeting_example();
  auto res = run(inst, testing::pair_plan("s1", "s2", q(15)));
  const auto& tr = res.trace;
  int s1 = leaf_of(tr, "s1"), s2 = leaf_of(tr, "s2");
  CHECK(tr.atf(s1, inst.id("m1")) == q(12));
  CHECK(tr.atf(s2, inst.id("m1")) == q(12));
  CHECK(tr.atf(s1, inst.id("m2")) == q(13));
  CHECK(tr.atf(s1, inst.id("v")) == q(14));
  std::vector<VertexId> p1{inst.id("s1"), inst.id("A0"), inst.id("m1"), inst.id("A1"), inst.id("m2"), inst.id("v")};
  auto mp = meeting_point(tr, s1, p1);
  REQUIRE(mp);
  CHECK(mp->vertex == inst.id("m1"));
  CHECK(mp->proper);
  CHECK(mp->lemma_holds);
  std::span<const VertexId> tail(p1.begin() + mp->position, p1.end());
  Rational bound = q(2) * tr.time(mp->atf_s_v) + tr.time(mp->atf_r_v) - q(3) * tr.time(mp->atf_s_m);
  CHECK(path_cost(inst, tail) == q(5));
  CHECK(bound == q(6));
  std::vector<VertexId> bad{inst.id("s1"), inst.id("m1")};
  CHECK_THROWS_AS(meeting_point(tr, s1, bad), InvalidInput);
}

TEST_CASE("growth: no interaction gives no meeting point") {
  auto inst = make_instance({{"a", "x", q(1)}, {"x", "b", q(10)}}, {"a", "b"}, "a");
  auto res = run(inst, testing::pair_plan("a", "b", q(2)));
  int a = leaf_of(res.trace, "a");
  std::vector<VertexId> p{inst.id("a"), inst.id("x")};
  CHECK_FALSE(meeting_point(res.trace, a, p).has_value());
}

TEST_CASE("growth: hand-built infeasible dual is rejected") {
  auto inst = make_instance({{"a", "b", q(3)}}, {"a", "b"}, "a");
  DualSolution d;
  d.root = inst.id("a");
  d.entries.push_back(DualEntry{{inst.id("b")}, q(4)});
  auto rep = verify_dual_feasibility(d, inst);
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violated.size() == 1);
  CHECK(inst.tail(rep.violated[0]) == inst.id("b"));
  CHECK(dual_objective(DualSolution{}, inst) == 0);
}

TEST_CASE("growth: oversized plan on a star is infeasible") {
  InstanceBuilder b;
  for (int i = 0; i < 4; ++i) b.add_edge("c", "t" + std::to_string(i), q(1));
  for (int i = 0; i < 4; ++i) b.add_terminal(b.vertex("t" + std::to_string(i)));
  b.set_root(b.vertex("t0"));
  auto inst = b.build();
  auto plan = scale(canonical_plan(inst), q(3));
  auto res = run(inst, plan);
  auto rep = is_feasible_run(res.trace);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.time.has_value());
  CHECK(rep.set >= 0);
}

TEST_CASE("growth: event engine agrees with a naive simulator") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 60; ++it) {
    auto inst = random_instance(rng, 7 + it % 4, 2 + it % 4, 4);
    auto plan = random_plan(rng, inst);
    auto res = run(inst, plan);
    auto naive = naive_growth(inst, plan, res.trace.root());
    for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a) {
      auto mine = res.trace.tight_time(a);
      if (naive.tight[a]) {
        REQUIRE(mine.has_value());
        CHECK(*mine == *naive.tight[a]);
      } else {
        CHECK_FALSE(mine.has_value());
      }
    }
    CHECK(res.trace.online_objective() == naive.objective);
    CHECK(dual_objective(res.trace) == naive.objective);
    CHECK(dual_objective(res.dual, inst) == naive.objective);
    CHECK(verify_dual_feasibility(res.dual, inst).feasible);
    auto atf = all_set_atf(res.trace);
    for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a) {
      CHECK(arc_load(res.trace, atf, a) == naive.load[a]);
      CHECK(arc_load(res.trace, atf, a) <= inst.cost(a));
    }
    if (is_feasible_run(res.trace).feasible) CHECK(dual_objective(res.trace) == value(plan));
  }
}

TEST_CASE("growth: reach is antitone along the laminar family") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    auto inst = random_instance(rng, 9, 4, 5);
    auto res = run(inst, random_plan(rng, inst));
    const auto& d = res.trace.sets();
    auto atf = all_set_atf(res.trace);
    for (std::size_t s = 0; s < d.sets.size(); ++s) {
      int p = d.sets[s].parent;
      if (p < 0) continue;
      for (std::size_t v = 0; v < inst.num_vertices(); ++v) CHECK(atf[p][v] <= atf[s][v]);
    }
  }
}

TEST_CASE("growth: early stop keeps the objective") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    auto inst = random_instance(rng, 9, 4, 5);
    auto plan = random_plan(rng, inst);
    GrowthOptions o;
    o.stop_when_all_reach_root = true;
    o.materialize_dual = false;
    auto fast = run(inst, plan, o);
    auto full = run(inst, plan);
    CHECK(fast.trace.online_objective() == full.trace.online_objective());
  }
}

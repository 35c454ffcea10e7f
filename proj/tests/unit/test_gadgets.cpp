#include "doctest.h"
#include "helpers.hpp"
#include "moat/gadgets.hpp"
#include "moat/growth.hpp"
#include "moat/steiner.hpp"

using namespace moat;
using testing::q;

namespace {

std::string failures(const GadgetReport& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (!c.ok) out += c.name + ": " + c.detail + "\n";
  return out;
}

}  // namespace

TEST_CASE("gadgets: 3x construction size") {
  auto g = three_x_gadget(1);
  // s, s*, w and x0..x3
  CHECK(g.instance.num_vertices() == 7);
  CHECK(g.instance.num_edges() == 3 + 1 + 1 + 1);
  CHECK(g.instance.out_arcs(g.instance.id("x2")).size() == 3);
  CHECK(g.instance.out_arcs(g.instance.id("x3")).size() == 2);
}

TEST_CASE("gadgets: 3x lemma for k = 1, 2, 3") {
  for (int k : {1, 2, 3}) {
    auto r = verify_gadget_lemma(three_x_gadget(k), GadgetKind::kThreeX);
    INFO(failures(r));
    CHECK(r.ok);
  }
}

TEST_CASE("gadgets: jump lemma for k = 1") {
  auto r = verify_gadget_lemma(jump_gadget(1), GadgetKind::kJump);
  INFO(failures(r));
  CHECK(r.ok);
}

TEST_CASE("gadgets: merge at 0 leaves nothing to check") {
  auto g = three_x_gadget(1);
  auto r = verify_gadget_lemma(g, GadgetKind::kThreeX, MergePlan::trivial({"s", "s*"}));
  CHECK(r.ok);
  auto res = run(g.instance, MergePlan::trivial({"s", "s*"}));
  CHECK(res.trace.time(res.trace.end_index()) == 0);
}

TEST_CASE("gadgets: k from epsilon") {
  CHECK(gadget_k(q(1, 6)) == 1);
  CHECK(gadget_k(q(1, 7)) == 2);
  CHECK(gadget_k(q(1, 12)) == 2);
  CHECK(gadget_k(q(1, 100)) == 17);
}

TEST_CASE("gadgets: composed instance distances and TMST") {
  int n = 5;
  auto inst = lower_bound_instance(n, q(1, 6));
  CHECK(inst.num_vertices() == std::size_t(n + n * (n - 1) * (1 + (n - 2) * (31 + 15 * 4))));
  MetricClosure m(inst);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      CHECK(m.distance(inst.terminals()[i], inst.terminals()[j]) == 2);
  for (int s = 0; s < n; ++s)
    for (int sp = 0; sp < n; ++sp) {
      if (s == sp) continue;
      VertexId v = inst.id(central_vertex_name(s, sp));
      for (int x = 0; x < n; ++x) CHECK(m.distance(inst.terminals()[x], v) <= 4);
    }
  CHECK(tmst(inst).cost == 2 * (n - 1));
}

TEST_CASE("gadgets: names are deterministic") {
  auto a = lower_bound_instance(4, q(1, 6));
  auto b = lower_bound_instance(4, q(1, 6));
  REQUIRE(a.num_vertices() == b.num_vertices());
  for (VertexId v = 0; v < VertexId(a.num_vertices()); ++v) CHECK(a.name(v) == b.name(v));
  CHECK(a.find("g0_1j2t3x1").has_value());
}

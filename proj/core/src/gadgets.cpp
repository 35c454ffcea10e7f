#include "moat/gadgets.hpp"

#include <algorithm>
#include <sstream>

#include "moat/growth.hpp"
#include "moat/steiner.hpp"
#include "moat/subdivide.hpp"

namespace moat {

VertexId add_three_x_gadget(InstanceBuilder& b, VertexId s, VertexId s_star, int k, const std::string& prefix,
                            std::optional<VertexId> w) {
  if (k < 1) throw InvalidInput("gadget parameter k must be positive");
  Rational step(1, 6 * std::int64_t(k));
  std::vector<VertexId> x;
  for (int j = 0; j <= 2 * k + 1; ++j) x.push_back(b.add_vertex(prefix + "x" + std::to_string(j)));
  VertexId wv = w ? *w : b.add_vertex(prefix + "w");
  for (int j = 0; j <= 2 * k; ++j) b.add_edge(x[j], x[j + 1], step);
  b.add_edge(s_star, x[0], Rational(1) - step);
  for (int j = 1; j <= k; ++j) b.add_edge(s, x[2 * j], Rational(1) - step);
  b.add_edge(x[2 * k + 1], wv, Rational(1, 6));
  return wv;
}

VertexId add_jump_gadget(InstanceBuilder& b, VertexId s, VertexId s_prime, VertexId s_star, int k,
                         const std::string& prefix, std::optional<VertexId> w) {
  if (k < 1) throw InvalidInput("gadget parameter k must be positive");
  Rational step(1, 6 * std::int64_t(k));
  std::vector<VertexId> x;
  for (int j = 0; j <= 30 * k; ++j) x.push_back(b.add_vertex(prefix + "x" + std::to_string(j)));
  VertexId wv = w ? *w : b.add_vertex(prefix + "w");
  for (int j = 0; j < 30 * k; ++j) b.add_edge(x[j], x[j + 1], step);
  b.add_edge(x[30 * k], wv, step);
  for (int j = 1; j <= 15 * k; ++j) b.add_edge(s, x[2 * j - 1], Rational(7, 6) - step);
  add_three_x_gadget(b, s, s_star, k, prefix + "t0", x[0]);
  for (int j = 1; j < 15 * k; ++j) add_three_x_gadget(b, s, s_prime, k, prefix + "t" + std::to_string(j), x[2 * j]);
  return wv;
}

Gadget three_x_gadget(int k) {
  InstanceBuilder b;
  VertexId s = b.add_vertex("s"), st = b.add_vertex("s*");
  b.add_terminal(s);
  b.add_terminal(st);
  b.set_root(st);
  add_three_x_gadget(b, s, st, k, "");
  Gadget g;
  g.instance = b.build();
  g.w = g.instance.id("w");
  g.k = k;
  return g;
}

Gadget jump_gadget(int k) {
  InstanceBuilder b;
  VertexId s = b.add_vertex("s"), sp = b.add_vertex("s'"), st = b.add_vertex("s*");
  b.add_terminal(s);
  b.add_terminal(sp);
  b.add_terminal(st);
  b.set_root(st);
  add_jump_gadget(b, s, sp, st, k, "");
  Gadget g;
  g.instance = b.build();
  g.w = g.instance.id("w");
  g.k = k;
  return g;
}

int gadget_k(const Rational& eps) {
  if (eps.sign() <= 0) throw InvalidInput("epsilon must be positive");
  return int(std::max<std::int64_t>(1, (Rational(1) / (Rational(6) * eps)).ceil()));
}

std::string central_vertex_name(int s, int s_prime) {
  return "g" + std::to_string(s) + "_" + std::to_string(s_prime) + "v";
}

Instance lower_bound_instance(int terminals, const Rational& eps) {
  if (terminals < 2) throw InvalidInput("lower bound instance needs at least two terminals");
  int k = gadget_k(eps);
  InstanceBuilder b;
  std::vector<VertexId> r;
  for (int i = 0; i < terminals; ++i) {
    r.push_back(b.add_vertex("r" + std::to_string(i)));
    b.add_terminal(r.back());
  }
  b.set_root(r[0]);
  for (int s = 0; s < terminals; ++s)
    for (int sp = 0; sp < terminals; ++sp) {
      if (s == sp) continue;
      std::string pair = "g" + std::to_string(s) + "_" + std::to_string(sp);
      VertexId v = b.add_vertex(central_vertex_name(s, sp));
      for (int c = 0; c < terminals; ++c)
        if (c != s && c != sp) add_jump_gadget(b, r[s], r[sp], r[c], k, pair + "j" + std::to_string(c), v);
    }
  return b.build();
}

namespace {

struct Checker {
  GadgetReport report;
  void expect(const std::string& name, bool ok, const std::string& detail = {}) {
    report.checks.push_back({name, ok, detail});
    report.ok = report.ok && ok;
  }
  void equal(const std::string& name, const Rational& got, const Rational& want) {
    expect(name, got == want, "got " + got.str() + ", expected " + want.str());
  }
  void at_most(const std::string& name, const Rational& got, const Rational& bound) {
    expect(name, got <= bound, "got " + got.str() + ", bound " + bound.str());
  }
  void at_least(const std::string& name, const Rational& got, const Rational& bound) {
    expect(name, got >= bound, "got " + got.str() + ", bound " + bound.str());
  }
};

void static_checks(Checker& c, const Gadget& g, GadgetKind kind) {
  const Instance& inst = g.instance;
  Rational step(1, 6 * std::int64_t(g.k));
  VertexId s = inst.id("s"), st = inst.id("s*"), w = g.w;
  auto dist = [&](VertexId a, VertexId b) { return shortest_distance(inst, a, b); };
  if (kind == GadgetKind::kThreeX) {
    c.equal("dist(s,w)", dist(s, w), Rational(7, 6));
    c.equal("dist(s*,w)", dist(st, w), Rational(3, 2));
    c.equal("dist(s,s*)", dist(s, st), Rational(2));
    std::vector<VertexId> X{s, st, w};
    c.equal("component(s,s*,w)", steiner_cost(inst, X).cost, Rational(5, 2) - step);
  } else {
    VertexId sp = inst.id("s'");
    c.equal("dist(s,w)", dist(s, w), Rational(7, 6) + step);
    c.equal("dist(s',w)", dist(sp, w), Rational(3, 2) + Rational(3) * step);
    c.equal("dist(s*,w)", dist(st, w), Rational(2) + Rational(7, 6) + step);
    c.equal("dist(s*,s)", dist(st, s), Rational(2));
    c.equal("dist(s',s)", dist(sp, s), Rational(2));
    c.at_least("dist(s*,s')", dist(st, sp), Rational(2));
    std::vector<char> blocked(inst.num_vertices(), 0);
    blocked[s] = blocked[sp] = 1;
    std::vector<VertexId> src{st};
    auto sp_paths = dijkstra(inst, src, &blocked);
    c.at_least("terminal-free s*-w path", sp_paths.dist[w].value_or(Rational(1000000)), Rational(6));
    std::vector<VertexId> X{s, sp, st};
    c.at_least("component(s,s',s*)", steiner_cost(inst, X).cost, Rational(4));
  }
  auto mst = is_mst_optimal(inst);
  c.expect("mst-optimal", mst.mst_optimal);
}

void growth_checks(Checker& c, const Gadget& g, GadgetKind kind, const MergePlan& plan) {
  const Instance& inst = g.instance;
  Rational step(1, 6 * std::int64_t(g.k));
  Rational when = kind == GadgetKind::kThreeX ? Rational(7, 6) : Rational(7, 6) + step;
  std::string tag = " [plan " + std::to_string(c.report.checks.size()) + "]";
  auto ws = make_well_subdivided(inst, plan);
  GrowthOptions opt;
  opt.record_events = false;
  opt.materialize_dual = false;
  auto res = run(ws.instance, plan, opt);
  const GrowthTrace& tr = res.trace;
  VertexId w = ws.instance.id(inst.name(g.w));
  int s = plan.index("s"), st = plan.index("s*");
  Rational end = tr.time(tr.end_index());
  if (end < when) {
    // Every terminal merged before the claimed time: nothing to assert.
    c.expect("run ends before " + when.str() + tag, true, "end " + end.str());
    return;
  }
  auto reach = [&](int leaf) { return tr.atf(leaf, w); };
  auto as = reach(s);
  c.expect("atf(s,w)" + tag, as && *as == when, as ? as->str() : "never");
  if (kind == GadgetKind::kJump) {
    int sp = plan.index("s'");
    if (plan.time(s, sp) >= when) {
      auto asp = reach(sp);
      c.expect("atf(s',w)" + tag, asp && *asp == when, asp ? asp->str() : "never");
    }
  }
  auto ast = reach(st);
  Rational m = plan.time(st, s);
  Rational lhs = ast ? std::min(*ast, m) : m;
  c.at_most("min(atf(s*,w), merge(s*,s))" + tag, lhs, when);
}

MergePlan gadget_plan(GadgetKind kind, const Rational& s_star_merge, const Rational& late) {
  if (kind == GadgetKind::kThreeX) {
    Matrix u{{Rational(0), s_star_merge}, {s_star_merge, Rational(0)}};
    return MergePlan({"s", "s*"}, u);
  }
  // merge(s,s') = late; s* joins s at s_star_merge, or everything at late.
  Rational m = std::min(s_star_merge, late);
  Matrix u(3, std::vector<Rational>(3));
  u[0][1] = u[1][0] = late;
  u[0][2] = u[2][0] = m;
  u[1][2] = u[2][1] = late;
  return MergePlan({"s", "s'", "s*"}, u);
}

}  // namespace

GadgetReport verify_gadget_lemma(const Gadget& g, GadgetKind kind, const MergePlan& plan) {
  Checker c;
  static_checks(c, g, kind);
  growth_checks(c, g, kind, plan);
  return c.report;
}

GadgetReport verify_gadget_lemma(const Gadget& g, GadgetKind kind) {
  Checker c;
  static_checks(c, g, kind);
  Rational step(1, 6 * std::int64_t(g.k));
  Rational late = Rational(7, 6) + step + Rational(1, 3);
  for (const Rational& m : {Rational(0), Rational(1, 2), Rational(1), Rational(7, 6), late, Rational(3)})
    growth_checks(c, g, kind, gadget_plan(kind, m, late));
  growth_checks(c, g, kind, gadget_plan(kind, Rational(0), Rational(0)));
  return c.report;
}

}  // namespace moat

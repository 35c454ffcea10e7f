#include "moatlab/experiments.hpp"

#include <algorithm>
#include <map>

#include "moat/gadgets.hpp"
#include "moat/good_plan.hpp"
#include "moat/merge_plan.hpp"
#include "moat/subdivide.hpp"

namespace moatlab {

using namespace moat;

namespace {

std::string str(const Rational& r) { return r.str(); }

Json rat(const Rational& r) { return r.str(); }

void tick(const ExperimentOptions& opt, const std::string& label) {
  if (opt.progress) opt.progress(label);
}

Json instance_summary(const Instance& inst) {
  return Json{{"vertices", inst.num_vertices()}, {"edges", inst.num_edges()}, {"terminals", inst.num_terminals()}};
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Canonical plan scaled by 7/6 (1 - eps).
MergePlan plan_712(const Instance& inst, const Rational& eps) {
  return scale(canonical_plan(inst), Rational(7, 6) * (Rational(1) - eps));
}

// Canonical x 7/6 (1 - eps), well-subdivision, dual growth. Adds the 7/12
// assertion and, for strictly 0-good plans, the safety assertion.
void pipeline_712(Report& rep, const std::string& label, const Instance& inst, bool mst_optimal,
                  const Rational& eps, int gamma_cap, int samples, Rng& rng) {
  Rational T = tmst(inst).cost;
  Rational target = (Rational(1) - eps) * Rational(7, 12) * T;
  MergePlan plan = plan_712(inst, eps);
  auto ws = make_well_subdivided(inst, plan);
  auto res = run(ws.instance, plan);
  bool feasible = is_feasible_run(res.trace).feasible;
  Rational obj = dual_objective(res.dual, ws.instance);
  bool dual_ok = verify_dual_feasibility(res.dual, ws.instance).feasible;
  Json d{{"instance", label},
         {"size", instance_summary(inst)},
         {"subdivided_vertices", ws.instance.num_vertices()},
         {"tmst", rat(T)},
         {"mst_optimal", mst_optimal},
         {"feasible", feasible},
         {"dual", rat(obj)},
         {"target", rat(target)},
         {"plan_value", rat(value(plan))}};
  rep.check(1, label + ": feasible dual equals (1-eps) 7/12 TMST",
            mst_optimal && feasible && dual_ok && obj == target && res.trace.online_objective() == obj &&
                value(plan) == target,
            d);

  GammaReport g = classify_gamma(plan, inst, Rational(0), gamma_cap);
  Json s{{"instance", label}, {"strictly_0_good", g.strictly_good}, {"gamma_cap", g.cap}, {"bounded", g.bounded}};
  if (!mst_optimal || !g.strictly_good) {
    s["skipped"] = true;
    rep.data["safety_skipped"].push_back(s);
    return;
  }
  SafetyStats st = check_safety(res.trace, rng, samples);
  s["safety"] = st.to_json();
  rep.check(8, label + ": no unsafe edges and the meeting point bound holds", st.ok(), s);
}

}  // namespace

bool Report::check(int criterion, std::string name, bool pass, Json detail) {
  assertions.push_back(Assertion{criterion, std::move(name), pass, std::move(detail)});
  return pass;
}

bool Report::pass() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

bool Report::pass(int criterion) const {
  bool any = false;
  for (const auto& a : assertions)
    if (a.criterion == criterion) {
      any = true;
      if (!a.pass) return false;
    }
  return any;
}

std::size_t Report::count(int criterion) const {
  return std::count_if(assertions.begin(), assertions.end(),
                       [&](const Assertion& a) { return a.criterion == criterion; });
}

std::string Report::to_json() const {
  Json j;
  j["experiment"] = experiment;
  j["params"] = params;
  j["pass"] = pass();
  Json list = Json::array();
  for (const auto& a : assertions) {
    Json x{{"criterion", a.criterion}, {"name", a.name}, {"pass", a.pass}};
    if (!a.detail.is_null()) x["detail"] = a.detail;
    list.push_back(std::move(x));
  }
  j["assertions"] = std::move(list);
  j["data"] = data;
  return j.dump(2) + "\n";
}

Json SafetyStats::to_json() const {
  return Json{{"edges", edges},
              {"flagged", flagged},
              {"paths", paths},
              {"proper", proper},
              {"unsafe_paths", unsafe_paths},
              {"lemma_failures", lemma_failures},
              {"bound_failures", bound_failures}};
}

SafetyStats check_safety(const GrowthTrace& trace, Rng& rng, int per_set) {
  SafetyStats st;
  auto report = safe_edge_report(trace);
  st.edges = report.size();
  std::map<ArcId, std::size_t> entry_of;
  for (std::size_t i = 0; i < report.size(); ++i) {
    entry_of[report[i].arc] = i;
    st.flagged += report[i].flagged;
  }
  const Instance& inst = trace.instance();
  const Dendrogram& d = trace.sets();
  auto arc_of = [&](VertexId u, VertexId v) {
    EdgeId e = *inst.find_edge(u, v);
    return inst.edge(e).u == u ? ArcId(2 * e) : ArcId(2 * e + 1);
  };
  for (int set = 0; set < int(d.sets.size()); ++set) {
    if (set == d.top || trace.set_start(set) == kNever) continue;
    auto atf = trace.atf_indices_for_set(set);
    int lo = trace.set_start(set), hi = trace.set_end(set);
    std::vector<VertexId> candidates;
    for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v) {
      // S actively reaches v.
      if (atf[v] == kNever || atf[v] > hi || atf[v] < lo) continue;
      bool member = false;
      for (int x : d.sets[set].members) member |= trace.terminal_vertex(x) == v;
      if (!member) candidates.push_back(v);
    }
    for (int i = 0; i < int(candidates.size()) && i < per_set; ++i) {
      int j = uniform(rng, i, int(candidates.size()) - 1);
      std::swap(candidates[i], candidates[j]);
      VertexId v = candidates[i];
      auto path = s_tight_path(trace, set, v);
      ++st.paths;
      bool safe = true;
      for (std::size_t p = 0; p + 1 < path.size() && safe; ++p) {
        auto it = entry_of.find(arc_of(path[p], path[p + 1]));
        safe = it != entry_of.end() && is_s_safe(trace, report[it->second], set);
      }
      if (!safe) {
        ++st.unsafe_paths;
        continue;
      }
      auto mp = meeting_point(trace, set, path);
      if (!mp || !mp->proper) continue;
      ++st.proper;
      if (!mp->lemma_holds) ++st.lemma_failures;
      std::span<const VertexId> suffix(path.data() + mp->position, path.size() - mp->position);
      Rational bound = Rational(2) * trace.time(mp->atf_s_v) + trace.time(mp->atf_r_v) -
                       Rational(3) * trace.time(mp->atf_s_m);
      if (path_cost(inst, suffix) > bound) ++st.bound_failures;
    }
  }
  return st;
}

Instance order_sensitive_instance() {
  InstanceBuilder b;
  b.add_edge("s1", "v", Rational(18));
  b.add_edge("s2", "x", Rational(18));
  b.add_edge("s2", "z", Rational(18));
  b.add_edge("v", "x", Rational(2));
  b.add_edge("x", "z", Rational(4));
  b.add_terminal(b.vertex("s1"));
  b.add_terminal(b.vertex("s2"));
  b.set_root(b.vertex("s1"));
  return b.build();
}

MergePlan order_sensitive_plan() {
  Rational t(133, 6);
  return MergePlan({"s1", "s2"}, Matrix{{Rational(0), t}, {t, Rational(0)}});
}

Report mst_optimal_712(const ExperimentOptions& opt) {
  Report rep;
  rep.experiment = "mst-optimal-712";
  int terminals = opt.terminals.value_or(10);
  int n = opt.n.value_or(10);
  Rational eps = opt.eps.value_or(Rational(1, 100));
  Rational lb_eps(1, 6);
  rep.params = Json{{"seed", opt.seed}, {"terminals", terminals}, {"n", n}, {"eps", rat(eps)},
                    {"lower_bound_eps", rat(lb_eps)}};
  rep.data["safety_skipped"] = Json::array();
  Rng rng(opt.seed);
  if (eps.sign() <= 0 || eps >= Rational(1)) throw InvalidInput("eps must lie in (0, 1)");

  {
    Instance inst = lower_bound_instance(terminals, lb_eps);
    // Exhaustive improving-component search is out of reach at this size;
    // components are checked up to three terminals.
    auto m = is_mst_optimal(inst, 3);
    std::string label = "lower_bound_instance(" + std::to_string(terminals) + ")";
    pipeline_712(rep, label, inst, m.mst_optimal, eps, 3, 12, rng);
    tick(opt, label);
  }
  for (int i = 0; i < n; ++i) {
    RandomInstanceSpec spec{7 + i % 4, 3 + i % 3, 4, 9};
    Instance inst = random_mst_optimal(rng, spec);
    auto m = is_mst_optimal(inst);
    std::string label = "random_" + std::to_string(i);
    pipeline_712(rep, label, inst, m.mst_optimal && !m.bounded, eps, kDefaultGammaCap, 1000, rng);
    tick(opt, label);
  }
  return rep;
}

Report gap_1898(const ExperimentOptions& opt) {
  Report rep;
  rep.experiment = "gap-1898";
  Rational width(1, 1000000);
  rep.params = Json{{"width", rat(width)}};
  GapBound g = gap_bound(width);
  rep.data = Json{{"integral_lo", rat(g.integral_lo)},
                  {"integral_hi", rat(g.integral_hi)},
                  {"bound_lo", rat(g.bound_lo)},
                  {"bound_hi", rat(g.bound_hi)},
                  {"bound_approx", g.bound_hi.to_double()},
                  {"panels", g.panels}};
  rep.check(2, "integral enclosure width at most 1e-6", g.integral_hi - g.integral_lo <= Rational(1, 1000000));
  rep.check(2, "integral enclosed in [0.0505, 0.0515]",
            g.integral_lo >= Rational(505, 10000) && g.integral_hi <= Rational(515, 10000));
  rep.check(2, "bound is 2(1 - I)",
            g.bound_lo == Rational(2) * (Rational(1) - g.integral_hi) &&
                g.bound_hi == Rational(2) * (Rational(1) - g.integral_lo));
  rep.check(2, "bound at most 1.898", g.bound_hi <= Rational(1898, 1000));
  tick(opt, "gap_bound");
  return rep;
}

Report lower_bound_712(const ExperimentOptions& opt) {
  Report rep;
  rep.experiment = "lower-bound-712";
  int terminals = opt.terminals.value_or(25);
  int n = opt.n.value_or(100);
  Rational eps = opt.eps.value_or(Rational(1, 6));
  Rational delta(1, 100);
  rep.params = Json{{"seed", opt.seed}, {"terminals", terminals}, {"n", n}, {"eps", rat(eps)},
                    {"delta", rat(delta)}};
  if (terminals < 3) throw InvalidInput("lower bound instance needs at least 3 terminals");
  Rng rng(opt.seed);
  Instance inst = lower_bound_instance(terminals, eps);
  tick(opt, "build");
  Rational T = tmst(inst).cost;
  Rational upper = (Rational(7, 12) + eps) * T;
  Rational lower = (Rational(7, 12) - Rational(2, terminals - 1)) * T;
  rep.data["instance"] = instance_summary(inst);
  rep.data["k"] = gadget_k(eps);
  rep.data["tmst"] = rat(T);
  rep.data["upper"] = rat(upper);
  rep.data["lower"] = rat(lower);
  rep.check(3, "TMST = 2(|R| - 1)", T == Rational(2 * (terminals - 1)), rat(T));

  GrowthOptions go;
  go.record_events = false;
  go.materialize_dual = false;
  go.stop_when_all_reach_root = true;

  MergePlan canonical = canonical_plan(inst);
  Rational best_canonical;
  Rational max_ratio;
  Json family = Json::array();
  std::vector<Rational> scales{Rational(1, 2), Rational(1), Rational(7, 6) * (Rational(1) - delta), Rational(7, 6),
                               Rational(4, 3), Rational(3, 2), Rational(2)};
  for (const Rational& f : scales) {
    auto res = run(inst, scale(canonical, f), go);
    Rational obj = res.trace.online_objective();
    max_ratio = std::max(max_ratio, obj / T);
    family.push_back(Json{{"scale", rat(f)}, {"dual", rat(obj)}, {"ratio", rat(obj / T)}});
    rep.check(3, "canonical x " + str(f) + ": dual at most (7/12 + eps) TMST", obj <= upper, rat(obj));
    if (f == Rational(7, 6) * (Rational(1) - delta)) {
      best_canonical = obj;
      rep.check(3, "canonical x 7/6 (1 - delta): dual at least (7/12 - 2/(|R|-1)) TMST", obj >= lower, rat(obj));
    }
    tick(opt, "canonical x " + str(f));
  }
  rep.data["canonical_family"] = std::move(family);

  auto labels = terminal_labels(inst);
  Json randoms = Json::array();
  int violations = 0;
  for (int i = 0; i < n; ++i) {
    MergePlan plan = random_ultrametric(rng, labels, Rational(3), 72);
    auto res = run(inst, plan, go);
    Rational obj = res.trace.online_objective();
    max_ratio = std::max(max_ratio, obj / T);
    if (obj > upper) ++violations;
    randoms.push_back(rat(obj));
    tick(opt, "random_" + std::to_string(i));
  }
  rep.check(3, std::to_string(n) + " random ultrametric plans: dual at most (7/12 + eps) TMST", violations == 0,
            Json{{"violations", violations}});
  rep.data["random_duals"] = std::move(randoms);
  rep.data["max_ratio"] = rat(max_ratio);
  rep.data["max_ratio_approx"] = max_ratio.to_double();
  return rep;
}

Report gadget_lemmas(const ExperimentOptions& opt) {
  Report rep;
  rep.experiment = "gadget-lemmas";
  struct Case {
    std::string name;
    Gadget g;
    GadgetKind kind;
  };
  std::vector<Case> cases;
  cases.push_back({"three_x(k=1)", three_x_gadget(1), GadgetKind::kThreeX});
  cases.push_back({"three_x(k=3)", three_x_gadget(3), GadgetKind::kThreeX});
  cases.push_back({"jump(k=1)", jump_gadget(1), GadgetKind::kJump});
  for (const auto& c : cases) {
    GadgetReport r = verify_gadget_lemma(c.g, c.kind);
    Json failed = Json::array();
    for (const auto& ch : r.checks)
      if (!ch.ok) failed.push_back(Json{{"check", ch.name}, {"detail", ch.detail}});
    rep.check(4, c.name + ": all distance, atf and component checks hold", r.ok,
              Json{{"checks", r.checks.size()}, {"failed", failed}});
    rep.data[c.name] = instance_summary(c.g.instance);
    tick(opt, c.name);
  }
  return rep;
}

Report oracle_chain(const ExperimentOptions& opt) {
  Report rep;
  rep.experiment = "oracle-chain";
  int n = opt.n.value_or(30);
  rep.params = Json{{"seed", opt.seed},
                    {"n", n},
                    {"caps",
                     {{"bcr_vertices", opt.caps.bcr_vertices},
                      {"hyp_terminals", opt.caps.hyp_terminals},
                      {"opt_terminals", opt.caps.opt_terminals}}}};
  rep.data["safety_skipped"] = Json::array();
  Rng rng(opt.seed);
  Rational eps(1, 100);
  Rational worst_gap;
  int mst_optimal_members = 0;
  Json rows = Json::array();
  for (int i = 0; i < n; ++i) {
    RandomInstanceSpec spec{6 + i % 5, 2 + i % 4, 2 + i % 4, i % 2 ? 12 : 9};
    Instance inst = i % 2 ? random_hub_instance(rng, spec) : random_instance(rng, spec);
    std::string label = "instance_" + std::to_string(i);
    OracleChain c;
    try {
      c = oracle_chain(inst, opt.caps);
    } catch (const CapacityError& e) {
      rep.check(5, label + ": oracles within caps", false, e.what());
      tick(opt, label);
      continue;
    }
    Rational gap = c.opt / c.bcr;
    worst_gap = std::max(worst_gap, gap);
    rows.push_back(Json{{"instance", label},
                        {"size", instance_summary(inst)},
                        {"tmst", rat(c.tmst)},
                        {"bcr", rat(c.bcr)},
                        {"hyp", rat(c.hyp)},
                        {"opt", rat(c.opt)},
                        {"mst_optimal", c.mst_optimal}});
    rep.check(5, label + ": TMST/2 <= BCR <= HYP <= OPT <= TMST", c.holds);
    if (c.mst_optimal) {
      ++mst_optimal_members;
      rep.check(5, label + ": HYP = OPT on an MST-optimal instance", c.hyp_equals_opt);
    }
    rep.check(5, label + ": OPT/BCR at most 1.898", gap <= Rational(1898, 1000), rat(gap));

    std::vector<std::pair<std::string, MergePlan>> plans;
    auto labels = terminal_labels(inst);
    MergePlan canonical = canonical_plan(inst);
    plans.emplace_back("canonical", canonical);
    plans.emplace_back("canonical x 7/6 (1 - eps)", plan_712(inst, eps));
    plans.emplace_back("trivial", MergePlan::trivial(labels));
    for (int j = 0; j < 3; ++j) plans.emplace_back("random_" + std::to_string(j), random_ultrametric(rng, labels, 40));
    for (const auto& [name, plan] : plans) {
      auto res = run(inst, plan);
      Rational obj = dual_objective(res.dual, inst);
      bool dual_ok = verify_dual_feasibility(res.dual, inst).feasible;
      rep.check(6, label + " / " + name + ": dual feasible and at most BCR", dual_ok && obj <= c.bcr,
                Json{{"dual", rat(obj)}, {"bcr", rat(c.bcr)}});
      if (is_feasible_run(res.trace).feasible)
        rep.check(6, label + " / " + name + ": feasible run has dual = value(plan)", obj == value(plan),
                  Json{{"dual", rat(obj)}, {"value", rat(value(plan))}});
    }
    if (c.mst_optimal) pipeline_712(rep, label, inst, true, eps, kDefaultGammaCap, 1000, rng);
    tick(opt, label);
  }
  rep.data["instances"] = std::move(rows);
  rep.data["mst_optimal_members"] = mst_optimal_members;
  rep.data["worst_opt_over_bcr"] = rat(worst_gap);
  rep.data["worst_opt_over_bcr_approx"] = worst_gap.to_double();
  return rep;
}

Report subdivision_invariance(const ExperimentOptions& opt) {
  Report rep;
  rep.experiment = "subdivision-invariance";
  int n = opt.n.value_or(20);
  int rounds = 3;
  rep.params = Json{{"seed", opt.seed}, {"n", n}, {"rounds", rounds}};
  Rng rng(opt.seed);

  {
    Instance inst = order_sensitive_instance();
    MergePlan plan = order_sensitive_plan();
    int s1 = plan.index("s1");
    VertexId z = inst.id("z");
    auto nice = make_nice(inst, plan);
    rep.check(7, "order-sensitive: make_nice inserts exactly two vertices", nice.added == 2, nice.added);
    EdgeId vx = *inst.find_edge(inst.id("v"), inst.id("x"));
    EdgeId xz = *inst.find_edge(inst.id("x"), z);
    bool placed = nice.offsets[vx].size() == 3 && nice.offsets[vx][1] == Rational(1) &&
                  nice.offsets[xz].size() == 3 && nice.offsets[xz][1] == Rational(2);
    rep.check(7, "order-sensitive: inserted at distance 1 on {v,x} and 2 on {x,z}", placed);
    auto ct = continuous_run(inst, plan);
    auto res = run(nice.instance, plan);
    auto c_atf = ct.atf(s1, z), d_atf = res.trace.atf(s1, nice.instance.id("z"));
    rep.check(7, "order-sensitive: atf(s1, z) = 22 in the continuous and subdivided runs",
              c_atf && d_atf && *c_atf == Rational(22) && *d_atf == Rational(22),
              Json{{"continuous", c_atf ? rat(*c_atf) : Json()}, {"discrete", d_atf ? rat(*d_atf) : Json()}});
    bool same = true;
    for (int s = 0; s < int(plan.dendrogram().sets.size()); ++s)
      for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v)
        same &= ct.atf(s, v) == res.trace.atf(s, v);
    rep.check(7, "order-sensitive: continuous run matches the subdivided run on original vertices",
              same && ct.objective == res.trace.online_objective());
    tick(opt, "order-sensitive");
  }

  int failures = 0;
  Json rows = Json::array();
  for (int i = 0; i < n; ++i) {
    Instance inst = random_instance(rng, RandomInstanceSpec{8, 2 + i % 3, 4, 9});
    MergePlan plan = random_ultrametric(rng, terminal_labels(inst), 16);
    auto ws = make_well_subdivided(inst, plan);
    auto base = run(ws.instance, plan);
    std::size_t original = inst.num_vertices();
    std::size_t sets = plan.dendrogram().sets.size();
    Instance cur = ws.instance;
    bool ok = check_well_subdivided(base.trace).ok;
    for (int round = 0; round < rounds && ok; ++round) {
      std::vector<std::vector<Rational>> splits(cur.num_edges());
      for (EdgeId e = 0; e < EdgeId(cur.num_edges()); ++e)
        if (uniform(rng, 0, 2) == 0) splits[e].push_back(cur.edge(e).cost * Rational(uniform(rng, 1, 4), 5));
      auto further = subdivide_edges(cur, splits, "r" + std::to_string(round) + "_");
      cur = std::move(further.instance);
      auto again = run(cur, plan);
      ok &= again.trace.online_objective() == base.trace.online_objective();
      for (std::size_t s = 0; s < sets && ok; ++s)
        for (VertexId v = 0; v < VertexId(original); ++v)
          ok &= again.trace.atf(int(s), v) == base.trace.atf(int(s), v);
    }
    failures += !ok;
    rows.push_back(Json{{"instance", i},
                        {"well_subdivided_vertices", ws.instance.num_vertices()},
                        {"final_vertices", cur.num_vertices()},
                        {"invariant", ok}});
    tick(opt, "random_" + std::to_string(i));
  }
  rep.check(7, std::to_string(n) + " random instances: atf on original vertices survives " +
                   std::to_string(rounds) + " rounds of subdivision",
            failures == 0, Json{{"failures", failures}});
  rep.data["random"] = std::move(rows);
  return rep;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"mst-optimal-712", "gap-1898",    "lower-bound-712",
                                              "gadget-lemmas",   "oracle-chain", "subdivision-invariance"};
  return names;
}

Report run_experiment(std::string_view name, const ExperimentOptions& opt) {
  if (name == "mst-optimal-712") return mst_optimal_712(opt);
  if (name == "gap-1898") return gap_1898(opt);
  if (name == "lower-bound-712") return lower_bound_712(opt);
  if (name == "gadget-lemmas") return gadget_lemmas(opt);
  if (name == "oracle-chain") return oracle_chain(opt);
  if (name == "subdivision-invariance") return subdivision_invariance(opt);
  throw InvalidInput("unknown experiment '" + std::string(name) + "'");
}

}  // namespace moatlab

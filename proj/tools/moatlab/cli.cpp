#include "moatlab/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "moat/gadgets.hpp"
#include "moat/good_plan.hpp"
#include "moat/io.hpp"
#include "moat/oracles.hpp"
#include "moat/subdivide.hpp"
#include "moat/svg.hpp"
#include "moatlab/experiments.hpp"

namespace moatlab {

using namespace moat;

namespace {

std::string approx(const Rational& r) {
  std::ostringstream s;
  s << r.str() << " (~" << std::setprecision(10) << r.to_double() << ")";
  return s.str();
}

Rational rational_arg(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const Error&) {
    throw InvalidInput(std::string("bad ") + what + " '" + text + "'");
  }
}

std::vector<Rational> time_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(rational_arg(item, "frame time"));
  return out;
}

Instance with_root_name(const Instance& inst, const std::string& root) {
  if (root.empty()) return inst;
  auto v = inst.find(root);
  if (!v) throw InvalidInput("unknown root '" + root + "'");
  if (!inst.is_terminal(*v)) throw InvalidInput("root '" + root + "' is not a terminal");
  return inst.with_root(*v);
}

OracleCaps caps_with(int cap) {
  OracleCaps c = caps_from_env();
  if (cap > 0) c.bcr_vertices = c.hyp_terminals = c.opt_terminals = cap;
  return c;
}

struct GrowArgs {
  std::string instance, plan = "canonical", scale = "1", epsilon = "0", gamma, root, frames, out;
  bool subdivide = false;
};

int cmd_grow(const GrowArgs& a, std::ostream& out, std::ostream& err) {
  Instance inst = with_root_name(load_instance(a.instance), a.root);
  MergePlan plan;
  if (!a.gamma.empty()) {
    plan = construct_gamma_plan(relative_greedy(inst), rational_arg(a.gamma, "gamma"));
  } else if (a.plan == "canonical") {
    plan = canonical_plan(inst);
  } else if (a.plan == "trivial") {
    plan = MergePlan::trivial(terminal_labels(inst));
  } else {
    plan = parse_plan_json(read_file(a.plan));
  }
  Rational eps = rational_arg(a.epsilon, "epsilon");
  if (eps.sign() < 0 || eps >= Rational(1)) throw InvalidInput("epsilon must lie in [0, 1)");
  plan = scale(plan, rational_arg(a.scale, "scale") * (Rational(1) - eps));

  Instance grown = inst;
  if (a.subdivide) {
    auto ws = make_well_subdivided(inst, plan);
    err << "well-subdivision added " << ws.added << " vertices\n";
    grown = std::move(ws.instance);
  }
  auto res = run(grown, plan);
  Rational dual = dual_objective(res.dual, grown);
  Rational T = tmst(inst).cost;
  auto feas = is_feasible_run(res.trace);
  if (feas.feasible) {
    out << "feasible, dual = " << approx(dual) << "\n";
  } else {
    out << "infeasible at t = " << (feas.time ? feas.time->str() : "?") << ", dual = " << approx(dual) << "\n";
  }
  out << "value(plan) = " << approx(value(plan)) << "\n";
  out << "TMST = " << approx(T) << "\n";
  out << "dual/TMST = " << approx(dual / T) << "\n";

  auto times = time_list(a.frames);
  if (!a.out.empty() || !times.empty()) {
    std::filesystem::path dir = a.out.empty() ? std::filesystem::path(".") : std::filesystem::path(a.out);
    std::filesystem::create_directories(dir);
    if (!a.out.empty()) {
      write_file(dir / "trace.json", trace_to_json(res.trace));
      write_file(dir / "dual.json", dual_to_json(res.dual, grown));
      write_file(dir / "plan.json", plan_to_json(plan));
      if (a.subdivide) write_file(dir / "instance.json", instance_to_json(grown));
    }
    Layout layout = default_layout(grown);
    for (std::size_t i = 0; i < times.size(); ++i) {
      auto file = dir / ("frame_" + std::to_string(i) + ".svg");
      write_file(file, render_frame(res.trace, layout, times[i]));
      out << "wrote " << file.string() << "\n";
    }
  }
  return 0;
}

struct ExperimentArgs {
  std::string name, eps, out;
  std::uint64_t seed = 1;
  int n = 0, terminals = 0, cap = 0;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentOptions opt;
  opt.seed = a.seed;
  if (a.n > 0) opt.n = a.n;
  if (a.terminals > 0) opt.terminals = a.terminals;
  if (!a.eps.empty()) opt.eps = rational_arg(a.eps, "eps");
  opt.caps = caps_with(a.cap);
  Report rep = run_experiment(a.name, opt);
  std::string text = rep.to_json();
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
    out << "wrote " << a.out << "\n";
  }
  if (!rep.pass()) {
    for (const auto& x : rep.assertions)
      if (!x.pass) err << "FAIL [" << x.criterion << "] " << x.name << "\n";
    return 1;
  }
  return 0;
}

struct GapArgs {
  std::string instance, root;
  int cap = 0;
};

int cmd_gap(const GapArgs& a, std::ostream& out) {
  if (a.instance.empty()) {
    GapBound g = gap_bound();
    out << "integral in [" << g.integral_lo.to_double() << ", " << g.integral_hi.to_double() << "] (approx)\n";
    out << "bound = 2(1 - I) <= " << approx(g.bound_hi) << "\n";
    out << "panels = " << g.panels << "\n";
    return 0;
  }
  Instance inst = with_root_name(load_instance(a.instance), a.root);
  GreedyRun run = relative_greedy(inst, a.cap > 0 ? a.cap : kDefaultComponentCap);
  RhoFunction f = rho(run);
  out << "TMST = " << approx(run.tmst) << "\n";
  out << "greedy steps = " << run.steps.size() << (run.bounded ? " (component size bounded by " : " (cap ")
      << run.cap << ")\n";
  for (std::size_t i = 0; i < f.thresholds.size(); ++i)
    out << "rho breakpoint " << i << ": gamma < " << f.thresholds[i].str() << " gains " << f.fractions[i].str()
        << "\n";
  BestGamma b = best_gamma(f);
  out << "gamma* = " << approx(b.gamma) << "\n";
  out << "BCR >= " << approx(b.bound) << " * TMST = " << approx(b.bound * run.tmst) << "\n";
  OracleCaps caps = caps_with(0);
  if (int(inst.num_vertices()) <= caps.bcr_vertices) {
    Rational bcr = bcr_value(inst, {}, caps.bcr_vertices);
    out << "BCR = " << approx(bcr) << ", BCR/TMST = " << approx(bcr / run.tmst) << "\n";
  } else {
    out << "BCR oracle skipped: " << inst.num_vertices() << " vertices exceed the cap of " << caps.bcr_vertices
        << "\n";
  }
  return 0;
}

struct GadgetArgs {
  std::string kind, eps = "1/6", out;
  int k = 1, terminals = 4;
};

int cmd_gadget(const GadgetArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k < 1) throw InvalidInput("k must be positive");
  Instance inst;
  std::optional<GadgetReport> report;
  if (a.kind == "3x" || a.kind == "jump") {
    GadgetKind kind = a.kind == "3x" ? GadgetKind::kThreeX : GadgetKind::kJump;
    Gadget g = kind == GadgetKind::kThreeX ? three_x_gadget(a.k) : jump_gadget(a.k);
    report = verify_gadget_lemma(g, kind);
    inst = std::move(g.instance);
  } else {
    inst = lower_bound_instance(a.terminals, rational_arg(a.eps, "eps"));
  }
  if (inst.num_vertices() > 10000)
    err << "warning: " << inst.num_vertices() << " vertices; oracles and SVG output will not scale\n";
  out << a.kind << ": " << inst.num_vertices() << " vertices, " << inst.num_edges() << " edges, "
      << inst.num_terminals() << " terminals, TMST = " << tmst(inst).cost.str() << "\n";
  if (report) {
    for (const auto& c : report->checks)
      out << (c.ok ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  }
  if (!a.out.empty()) {
    write_file(a.out, instance_to_json(inst));
    out << "wrote " << a.out << "\n";
  }
  return report && !report->ok ? 1 : 0;
}

struct OracleArgs {
  std::string kind, instance, root;
  int cap = 0;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  Instance inst = with_root_name(load_instance(a.instance), a.root);
  OracleCaps caps = caps_with(a.cap);
  Rational v;
  if (a.kind == "bcr") v = bcr_value(inst, {}, caps.bcr_vertices);
  else if (a.kind == "hyp") v = hyp_value(inst, {}, caps.hyp_terminals);
  else if (a.kind == "opt") v = opt_value(inst, caps.opt_terminals);
  else v = tmst(inst).cost;
  out << a.kind << " = " << approx(v) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moat growing duals for the bidirected cut relaxation", "moatlab"};
  app.require_subcommand(1);

  GrowArgs grow;
  auto* g = app.add_subcommand("grow", "run dual growth on an instance and merge plan");
  g->add_option("-i,--instance", grow.instance, "instance (.json or .stp)")->required();
  g->add_option("--plan", grow.plan, "canonical, trivial, or a plan JSON file");
  g->add_option("--scale", grow.scale, "scale merge times by p/q");
  g->add_option("--epsilon", grow.epsilon, "further scale by 1 - eps");
  g->add_option("--gamma", grow.gamma, "use the gamma-good plan from the relative greedy run");
  g->add_option("--root", grow.root, "root terminal");
  g->add_flag("--subdivide", grow.subdivide, "well-subdivide before growing");
  g->add_option("--frames", grow.frames, "comma separated times for SVG frames");
  g->add_option("--out", grow.out, "output directory");

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "run a batch experiment and print a JSON report");
  e->add_option("name", ex.name, "experiment name")->required()->check(CLI::IsMember(experiment_names()));
  e->add_option("--seed", ex.seed, "random seed");
  e->add_option("--n", ex.n, "number of instances or plans");
  e->add_option("--terminals", ex.terminals, "terminal count");
  e->add_option("--eps", ex.eps, "epsilon p/q");
  e->add_option("--cap", ex.cap, "oracle size cap");
  e->add_option("--out", ex.out, "write the report here");

  GapArgs gap;
  auto* gp = app.add_subcommand("gap", "rho function, best gamma and the gap bound");
  gp->add_option("-i,--instance", gap.instance, "instance; without it print the 1.898 bound");
  gp->add_option("--root", gap.root, "root terminal");
  gp->add_option("--cap", gap.cap, "largest component size for the greedy run");

  GadgetArgs gad;
  auto* gd = app.add_subcommand("gadget", "build and check gadgets or the lower bound instance");
  gd->add_option("kind", gad.kind, "3x, jump or lowerbound")->required()->check(CLI::IsMember({"3x", "jump", "lowerbound"}));
  gd->add_option("--k", gad.k, "path resolution");
  gd->add_option("--eps", gad.eps, "epsilon for lowerbound");
  gd->add_option("--terminals", gad.terminals, "terminal count for lowerbound");
  gd->add_option("--out", gad.out, "write the instance JSON here");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "exact LP and Steiner values");
  o->add_option("kind", orc.kind, "bcr, hyp, opt or tmst")->required()->check(CLI::IsMember({"bcr", "hyp", "opt", "tmst"}));
  o->add_option("-i,--instance", orc.instance, "instance")->required();
  o->add_option("--root", orc.root, "root terminal");
  o->add_option("--cap", orc.cap, "oracle size cap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err);
  }

  try {
    if (g->parsed()) return cmd_grow(grow, out, err);
    if (e->parsed()) return cmd_experiment(ex, out, err);
    if (gp->parsed()) return cmd_gap(gap, out);
    if (gd->parsed()) return cmd_gadget(gad, out, err);
    if (o->parsed()) return cmd_oracle(orc, out);
  } catch (const FileNotFound& fe) {
    err << "error: " << fe.what() << "\n";
    return 2;
  } catch (const std::exception& ex2) {
    err << "error: " << ex2.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace moatlab

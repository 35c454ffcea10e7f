#include "moat/good_plan.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "moat/steiner.hpp"

namespace moat {

GreedyRun relative_greedy(const Instance& inst, int cap) {
  GreedyRun run;
  run.original = inst;
  run.cap = cap;
  run.graphs.push_back(inst);
  run.plans.push_back(canonical_plan(inst));
  std::vector<std::string> rep;
  for (VertexId t : inst.terminals()) rep.push_back(inst.name(t));
  run.reps.push_back(rep);
  run.tmst = tmst(inst).cost;
  for (;;) {
    const Instance& g = run.graphs.back();
    std::size_t k = g.num_terminals();
    if (k > 30) throw CapacityError("relative greedy supports at most 30 terminals");
    std::vector<VertexId> terms(g.terminals().begin(), g.terminals().end());
    MetricClosure metric(g);
    Matrix dist = metric.terminal_matrix();
    SteinerSolver solver(g, terms, true);
    std::optional<std::tuple<Rational, int, std::vector<int>, std::uint32_t, Rational, Rational>> best;
    int upto = std::min<int>(cap, int(k));
    for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << k); ++mask) {
      int size = __builtin_popcount(mask);
      if (size < 3 || size > upto) continue;
      std::vector<int> X;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) X.push_back(int(i));
      Rational d = drop_from_matrix(dist, X);
      if (d.sign() <= 0) continue;
      auto c = solver.cost(mask);
      if (!c) continue;
      Rational ratio = *c / d;
      if (!best || std::tie(ratio, size, X) < std::tie(std::get<0>(*best), std::get<1>(*best), std::get<2>(*best)))
        best = std::make_tuple(ratio, size, X, mask, *c, d);
    }
    run.bounded = upto < int(k);
    if (!best || !(std::get<0>(*best) < Rational(1))) break;
    auto& [ratio, size, X, mask, c, d] = *best;
    GreedyStep step;
    for (int i : X) step.terminals.push_back(g.name(terms[i]));
    step.component = solver.tree(mask);
    step.component.cost = c;
    step.cost = c;
    step.drop = d;
    step.ratio = ratio;
    std::vector<VertexId> xv;
    for (int i : X) xv.push_back(terms[i]);
    Instance next = contract(g, xv);
    const MergePlan& plan = run.plans.back();
    std::vector<int> xp;
    for (int i : X) xp.push_back(plan.index(g.name(terms[i])));
    MergePlan next_plan = contract_plan(plan, xp);
    std::string merged = plan.labels()[*std::min_element(xp.begin(), xp.end())];
    std::vector<std::string> next_rep = run.reps.back();
    for (auto& r : next_rep)
      if (std::find(step.terminals.begin(), step.terminals.end(), r) != step.terminals.end()) r = merged;
    run.steps.push_back(std::move(step));
    run.graphs.push_back(std::move(next));
    run.plans.push_back(std::move(next_plan));
    run.reps.push_back(std::move(next_rep));
  }
  return run;
}

Rational RhoFunction::operator()(const Rational& gamma) const {
  Rational total;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (gamma < thresholds[i]) total += fractions[i];
  return total;
}

Rational RhoFunction::integral(const Rational& lo, const Rational& hi) const {
  Rational total;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    Rational top = std::min(hi, thresholds[i]);
    if (lo < top) total += (top - lo) * fractions[i];
  }
  return total;
}

RhoFunction rho(const GreedyRun& run) {
  RhoFunction f;
  for (const auto& s : run.steps) {
    f.thresholds.push_back(Rational(1) - s.ratio);
    f.fractions.push_back(run.tmst.is_zero() ? Rational(0) : s.drop / run.tmst);
  }
  return f;
}

Rational a_of(const Rational& g) { return (Rational(7) - Rational(5) * g) / Rational(12); }

Rational b_of(const Rational& g) {
  return (Rational(7) - Rational(5) * g) * (Rational(3) - Rational(7) * g) / (Rational(12) * (Rational(9) - Rational(7) * g));
}

std::size_t improving_prefix(const GreedyRun& run, const Rational& gamma) {
  std::size_t j = 0;
  while (j < run.steps.size() && run.steps[j].ratio < Rational(1) - gamma) ++j;
  return j;
}

Matrix gamma_upper_bound(const GreedyRun& run, const Rational& gamma) {
  if (gamma.sign() < 0 || gamma > Rational(1, 5)) throw InvalidInput("gamma must lie in [0, 1/5]");
  std::size_t j = improving_prefix(run, gamma);
  const MergePlan& mg = run.plans.front();
  const MergePlan& mp = run.plans[j];
  const auto& rep = run.reps[j];
  Rational f1 = (Rational(7) - Rational(5) * gamma) / Rational(6);
  Rational f2 = (Rational(7) - Rational(5) * gamma) / (Rational(9) - Rational(7) * gamma);
  std::size_t k = mg.size();
  Matrix u(k, std::vector<Rational>(k));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = x + 1; y < k; ++y) {
      Rational lifted = rep[x] == rep[y] ? Rational(0) : mp.time(mp.index(rep[x]), mp.index(rep[y]));
      u[x][y] = u[y][x] = std::max(f1 * lifted, f2 * mg.time(int(x), int(y)));
    }
  return u;
}

MergePlan construct_gamma_plan(const GreedyRun& run, const Rational& gamma) {
  return from_upper_bound(run.plans.front().labels(), gamma_upper_bound(run, gamma));
}

namespace {

// (a - 1/2)/b = 1 - (12/17)/(7-5g) - (24/17)/(3-7g), concave on [0, 1/5].
Rational integrand(const Rational& g) {
  return Rational(1) - Rational(12, 17) / (Rational(7) - Rational(5) * g) -
         Rational(24, 17) / (Rational(3) - Rational(7) * g);
}

constexpr std::int64_t kGrid = 1000000000000LL;

Rational round_down(const Rational& x) { return Rational((x * Rational(kGrid)).floor(), kGrid); }
Rational round_up(const Rational& x) { return Rational((x * Rational(kGrid)).ceil(), kGrid); }

}  // namespace

GapBound gap_bound(const Rational& width) {
  const Rational hi(1, 5);
  GapBound out;
  for (int n = 8;; n *= 2) {
    Rational h = hi / Rational(n);
    // Concavity: the trapezoid sum lies below the integral, the midpoint sum above.
    Rational trap = (round_down(integrand(Rational(0))) + round_down(integrand(hi))) / Rational(2);
    Rational mid;
    for (int i = 1; i < n; ++i) trap += round_down(integrand(h * Rational(i)));
    for (int i = 0; i < n; ++i) mid += round_up(integrand(h * (Rational(i) + Rational(1, 2))));
    out.integral_lo = trap * h;
    out.integral_hi = mid * h;
    out.panels = n;
    if (out.integral_hi - out.integral_lo <= width || n > (1 << 20)) break;
  }
  out.bound_lo = Rational(2) * (Rational(1) - out.integral_hi);
  out.bound_hi = Rational(2) * (Rational(1) - out.integral_lo);
  return out;
}

BestGamma best_gamma(const RhoFunction& f) {
  const Rational top(1, 5);
  std::vector<Rational> cuts{Rational(0), top};
  for (const Rational& t : f.thresholds)
    if (t.sign() > 0 && t < top) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Rational> candidates = cuts;
  // Stationary points of a - P b inside each piece, found in floating point
  // and evaluated exactly.
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double P = f(cuts[i]).to_double();
    if (P <= 0) continue;
    auto deriv = [&](double g) {
      double num = (7 - 5 * g) * (3 - 7 * g), den = 12 * (9 - 7 * g);
      double dnum = -5 * (3 - 7 * g) - 7 * (7 - 5 * g), dden = -84;
      double db = (dnum * den - num * dden) / (den * den);
      return -5.0 / 12 - P * db;
    };
    double lo = cuts[i].to_double(), hi = cuts[i + 1].to_double();
    if (deriv(lo) <= 0 || deriv(hi) >= 0) continue;
    for (int it = 0; it < 100; ++it) {
      double m = (lo + hi) / 2;
      (deriv(m) > 0 ? lo : hi) = m;
    }
    Rational g(std::int64_t(std::llround(lo * 1e9)), 1000000000);
    if (cuts[i] < g && g < cuts[i + 1]) candidates.push_back(g);
  }
  BestGamma best;
  bool first = true;
  for (const Rational& g : candidates) {
    Rational v = a_of(g) - b_of(g) * f(g);
    if (first || v > best.raw) {
      best.gamma = g;
      best.raw = v;
      first = false;
    }
  }
  best.bound = std::max(best.raw, Rational(1, 2));
  return best;
}

}  // namespace moat

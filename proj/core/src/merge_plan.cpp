#include "moat/merge_plan.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "moat/steiner.hpp"

namespace moat {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    p[b] = a;
    return true;
  }
};

Dendrogram build_dendrogram(const Matrix& m) {
  Dendrogram d;
  int k = int(m.size());
  for (int i = 0; i < k; ++i) d.sets.push_back(PlanSet{{i}, Rational(0), std::nullopt, -1, {}});
  if (k == 0) return d;
  std::map<Rational, std::vector<std::pair<int, int>>> by_time;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) by_time[m[i][j]].emplace_back(i, j);
  UnionFind uf(k);
  std::vector<int> node_of(k);
  std::iota(node_of.begin(), node_of.end(), 0);
  for (auto& [t, pairs] : by_time) {
    // group the current components by their root after this time's unions
    std::vector<int> before(k);
    for (int i = 0; i < k; ++i) before[i] = uf.find(i);
    bool changed = false;
    for (auto [i, j] : pairs) changed |= uf.unite(i, j);
    if (!changed) continue;
    std::map<int, std::vector<int>> groups;  // new root -> old roots
    for (int i = 0; i < k; ++i)
      if (before[i] == i) groups[uf.find(i)].push_back(i);
    for (auto& [root, olds] : groups) {
      if (olds.size() < 2) continue;
      PlanSet s;
      s.activation = t;
      for (int o : olds) {
        int child = node_of[o];
        s.children.push_back(child);
        d.sets[child].deactivation = t;
        d.sets[child].parent = int(d.sets.size());
        s.members.insert(s.members.end(), d.sets[child].members.begin(), d.sets[child].members.end());
      }
      std::sort(s.members.begin(), s.members.end());
      node_of[root] = int(d.sets.size());
      d.sets.push_back(std::move(s));
    }
  }
  d.top = node_of[uf.find(0)];
  return d;
}

}  // namespace

int Dendrogram::lowest_common(std::span<const int> X) const {
  if (X.empty()) return top;
  int s = leaf(X[0]);
  auto contains = [&](int node) {
    const auto& mem = sets[node].members;
    for (int x : X)
      if (!std::binary_search(mem.begin(), mem.end(), x)) return false;
    return true;
  };
  while (!contains(s)) s = sets[s].parent;
  return s;
}

bool is_ultrametric(const Matrix& m) {
  std::size_t k = m.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l)
        if (m[i][l] > max(m[i][j], m[j][l])) return false;
  return true;
}

MergePlan::MergePlan(std::vector<std::string> labels, Matrix times)
    : labels_(std::move(labels)), times_(std::move(times)) {
  std::size_t k = labels_.size();
  if (times_.size() != k) throw InvalidInput("merge plan: matrix size mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    if (times_[i].size() != k) throw InvalidInput("merge plan: matrix size mismatch");
    if (!times_[i][i].is_zero()) throw InvalidInput("merge plan: nonzero diagonal");
    for (std::size_t j = 0; j < k; ++j) {
      if (times_[i][j].sign() < 0) throw InvalidInput("merge plan: negative merge time");
      if (times_[i][j] != times_[j][i]) throw InvalidInput("merge plan: not symmetric");
    }
  }
  if (!is_ultrametric(times_)) throw InvalidInput("merge plan: not ultrametric");
  dendrogram_ = build_dendrogram(times_);
}

MergePlan MergePlan::trivial(std::vector<std::string> labels) {
  std::size_t k = labels.size();
  return MergePlan(std::move(labels), Matrix(k, std::vector<Rational>(k)));
}

int MergePlan::index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return int(i);
  throw InvalidInput("merge plan: unknown terminal '" + std::string(label) + "'");
}

Rational MergePlan::max_time() const {
  Rational m;
  for (const auto& row : times_)
    for (const auto& t : row) m = max(m, t);
  return m;
}

std::vector<std::vector<int>> partition_at(const MergePlan& plan, const Rational& t) {
  int k = int(plan.size());
  UnionFind uf(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (plan.time(i, j) < t) uf.unite(i, j);
  std::map<int, std::vector<int>> parts;
  for (int i = 0; i < k; ++i) parts[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [r, p] : parts) out.push_back(std::move(p));
  return out;
}

Rational value(const MergePlan& plan) {
  const auto& d = plan.dendrogram();
  if (plan.size() <= 1) return Rational(0);
  Rational total;
  for (const auto& s : d.sets)
    if (s.deactivation) total += *s.deactivation - s.activation;
  return total - d.sets[d.top].activation;
}

Rational local_value(const MergePlan& plan, std::span<const int> X) {
  if (X.empty()) throw InvalidInput("local_value: empty set");
  const auto& d = plan.dendrogram();
  Rational horizon;
  for (int x : X)
    for (int y : X) horizon = max(horizon, plan.time(x, y));
  std::vector<char> in_x(plan.size(), 0);
  for (int x : X) in_x[x] = 1;
  Rational total;
  for (const auto& s : d.sets) {
    if (!s.deactivation) continue;
    bool meets = false;
    for (int m : s.members) meets |= bool(in_x[m]);
    if (!meets) continue;
    Rational end = min(*s.deactivation, horizon);
    if (s.activation < end) total += end - s.activation;
  }
  return total - horizon;
}

MergePlan from_upper_bound(std::vector<std::string> labels, const Matrix& u) {
  int k = int(labels.size());
  if (int(u.size()) != k) throw InvalidInput("upper bound: size mismatch");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (u[i][j] != u[j][i] || u[i][j].sign() < 0 || (i == j && !u[i][i].is_zero()))
        throw InvalidInput("upper bound must be symmetric, nonnegative, zero on the diagonal");
  auto tree = minimum_spanning_tree(u);
  std::vector<std::vector<std::pair<int, Rational>>> adj(k);
  for (auto [i, j] : tree.edges) {
    adj[i].emplace_back(j, u[i][j]);
    adj[j].emplace_back(i, u[i][j]);
  }
  Matrix m(k, std::vector<Rational>(k));
  for (int s = 0; s < k; ++s) {
    std::vector<char> seen(k, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto& [w, c] : adj[v]) {
        if (seen[w]) continue;
        seen[w] = 1;
        m[s][w] = max(m[s][v], c);
        stack.push_back(w);
      }
    }
  }
  return MergePlan(std::move(labels), std::move(m));
}

MergePlan canonical_plan(const Instance& inst, MetricClosure& metric) {
  Matrix u = metric.terminal_matrix();
  for (auto& row : u)
    for (auto& x : row) x /= Rational(2);
  std::vector<std::string> labels;
  for (VertexId t : inst.terminals()) labels.push_back(inst.name(t));
  return from_upper_bound(std::move(labels), u);
}

MergePlan canonical_plan(const Instance& inst) {
  MetricClosure metric(inst);
  return canonical_plan(inst, metric);
}

MergePlan scale(const MergePlan& plan, const Rational& factor) {
  if (factor.sign() <= 0) throw InvalidInput("scale factor must be positive");
  Matrix m = plan.times();
  for (auto& row : m)
    for (auto& x : row) x *= factor;
  return MergePlan(plan.labels(), std::move(m));
}

MergePlan contract_plan(const MergePlan& plan, std::span<const int> X) {
  if (X.empty()) throw InvalidInput("contract_plan: empty set");
  int k = int(plan.size());
  std::vector<char> in_x(k, 0);
  for (int x : X) {
    if (x < 0 || x >= k) throw InvalidInput("contract_plan: index out of range");
    in_x[x] = 1;
  }
  int rep = *std::min_element(X.begin(), X.end());
  std::vector<Rational> to_x(k);
  for (int a = 0; a < k; ++a) {
    std::optional<Rational> best;
    for (int x : X)
      if (!best || plan.time(a, x) < *best) best = plan.time(a, x);
    to_x[a] = *best;
  }
  std::vector<int> keep;
  for (int a = 0; a < k; ++a)
    if (!in_x[a] || a == rep) keep.push_back(a);
  std::size_t n = keep.size();
  Matrix m(n, std::vector<Rational>(n));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(plan.labels()[keep[i]]);
    for (std::size_t j = 0; j < n; ++j) {
      int a = keep[i], b = keep[j];
      if (a == b) continue;
      if (a == rep) m[i][j] = to_x[b];
      else if (b == rep) m[i][j] = to_x[a];
      else m[i][j] = min(plan.time(a, b), max(to_x[a], to_x[b]));
    }
  }
  return MergePlan(std::move(labels), std::move(m));
}

GammaReport classify_gamma(const MergePlan& plan, const Instance& inst, const Rational& gamma,
                           int subset_cap) {
  if (gamma.sign() < 0 || gamma > Rational(1, 5)) throw InvalidInput("gamma must lie in [0, 1/5]");
  int k = int(plan.size());
  if (k != int(inst.num_terminals())) throw InvalidInput("plan and instance terminal sets differ");
  std::vector<int> plan_of(k);
  for (int i = 0; i < k; ++i) plan_of[i] = plan.index(inst.name(inst.terminals()[i]));

  GammaReport rep;
  MetricClosure metric(inst);
  Matrix dist = metric.terminal_matrix();  // instance terminal order
  Rational general = (Rational(7) - Rational(5) * gamma) / Rational(12);
  Rational early = (Rational(7) - Rational(5) * gamma) / (Rational(18) - Rational(14) * gamma);
  Rational cheap_factor = (Rational(1) - gamma) * Rational(12) / (Rational(7) - Rational(5) * gamma);

  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Rational m = plan.time(plan_of[i], plan_of[j]);
      Rational bound = general * dist[i][j];
      if (m > bound && !rep.pair_violation) {
        rep.good = false;
        rep.pair_violation = std::make_pair(plan_of[i], plan_of[j]);
      }
      if (m >= bound && !rep.strict_pair_violation) {
        rep.strictly_good = false;
        rep.strict_pair_violation = std::make_pair(plan_of[i], plan_of[j]);
      }
    }

  int max_size = std::min(subset_cap, k);
  rep.cap = max_size;
  rep.bounded = max_size < k;
  if (k > 24) throw CapacityError();
  std::vector<VertexId> sources(inst.terminals().begin(), inst.terminals().end());
  SteinerSolver solver(inst, sources);
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    int size = __builtin_popcount(mask);
    if (size < 2 || size > max_size) continue;
    std::vector<int> X, Xp;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) {
        X.push_back(i);
        Xp.push_back(plan_of[i]);
      }
    Rational lv = local_value(plan, Xp);
    Rational c = *solver.cost(mask);
    Rational threshold = cheap_factor * lv;
    bool cheap = c < threshold;
    bool not_strictly_expensive = !(c > threshold);
    if (!cheap && !not_strictly_expensive) continue;
    bool has_early = false, has_strict_early = false;
    for (std::size_t a = 0; a < X.size(); ++a)
      for (std::size_t b = a + 1; b < X.size(); ++b) {
        Rational m = plan.time(Xp[a], Xp[b]);
        Rational bound = early * dist[X[a]][X[b]];
        has_early |= m <= bound;
        has_strict_early |= m < bound;
      }
    if (cheap) {
      ++rep.cheap_sets;
      if (!has_early && !rep.set_violation) {
        rep.good = false;
        std::sort(Xp.begin(), Xp.end());
        rep.set_violation = Xp;
      }
    }
    if (not_strictly_expensive && !has_strict_early && !rep.strict_set_violation) {
      rep.strictly_good = false;
      std::sort(Xp.begin(), Xp.end());
      rep.strict_set_violation = Xp;
    }
  }
  return rep;
}

}  // namespace moat

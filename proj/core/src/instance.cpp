#include "moat/instance.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "moat/steiner.hpp"

namespace moat {

std::optional<VertexId> Instance::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId Instance::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw InvalidInput("unknown vertex '" + std::string(name) + "'");
  return *v;
}

Instance Instance::with_root(std::optional<VertexId> r) const {
  if (r && !is_terminal(*r)) throw InvalidInput("root must be a terminal");
  Instance copy = *this;
  copy.root_ = r;
  return copy;
}

std::optional<EdgeId> Instance::find_edge(VertexId u, VertexId v) const {
  for (const Arc& a : out_arcs(u))
    if (a.head == v) return edge_of(a.id);
  return std::nullopt;
}

VertexId InstanceBuilder::add_vertex(std::string name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  VertexId id = static_cast<VertexId>(names_.size());
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  is_terminal_.push_back(0);
  return id;
}

VertexId InstanceBuilder::vertex(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw InvalidInput("unknown vertex '" + std::string(name) + "'");
  return it->second;
}

void InstanceBuilder::add_edge(VertexId u, VertexId v, Rational cost) {
  if (u < 0 || v < 0 || std::size_t(u) >= names_.size() || std::size_t(v) >= names_.size())
    throw InvalidInput("edge endpoint out of range");
  if (u == v) return;
  if (cost.sign() <= 0) throw InvalidInput("edge cost must be positive: " + names_[u] + "-" + names_[v]);
  std::uint64_t key = (std::uint64_t(std::min(u, v)) << 32) | std::uint32_t(std::max(u, v));
  auto it = edge_index_.find(key);
  if (it != edge_index_.end()) {
    Edge& e = edges_[it->second];
    if (cost < e.cost) e.cost = std::move(cost);
    return;
  }
  edge_index_.emplace(key, static_cast<EdgeId>(edges_.size()));
  edges_.push_back(Edge{u, v, std::move(cost)});
}

void InstanceBuilder::add_terminal(VertexId v) {
  if (v < 0 || std::size_t(v) >= names_.size()) throw InvalidInput("terminal out of range");
  if (is_terminal_[v]) return;
  is_terminal_[v] = 1;
  terminals_.push_back(v);
}

Instance InstanceBuilder::build() const {
  if (terminals_.empty()) throw InvalidInput("instance needs at least one terminal");
  if (root_ && !is_terminal_[*root_]) throw InvalidInput("root must be a terminal");
  Instance inst;
  inst.names_ = names_;
  inst.index_ = index_;
  inst.terminals_ = terminals_;
  inst.terminal_index_.assign(names_.size(), -1);
  for (std::size_t i = 0; i < terminals_.size(); ++i) inst.terminal_index_[terminals_[i]] = int(i);
  inst.root_ = root_;
  inst.edges_ = edges_;

  std::size_t n = names_.size();
  inst.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++inst.offsets_[e.u + 1];
    ++inst.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) inst.offsets_[i + 1] += inst.offsets_[i];
  inst.arcs_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(inst.offsets_.begin(), inst.offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    inst.arcs_[fill[edges_[e].u]++] = Arc{edges_[e].v, ArcId(2 * e)};
    inst.arcs_[fill[edges_[e].v]++] = Arc{edges_[e].u, ArcId(2 * e + 1)};
  }

  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{terminals_.front()};
  seen[terminals_.front()] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const Arc& a : inst.out_arcs(v))
      if (!seen[a.head]) {
        seen[a.head] = 1;
        stack.push_back(a.head);
      }
  }
  for (VertexId t : terminals_)
    if (!seen[t]) throw Disconnected("disconnected: terminal '" + names_[t] + "' unreachable");
  return inst;
}

ShortestPaths dijkstra(const Instance& inst, std::span<const VertexId> sources,
                       const std::vector<char>* blocked) {
  ShortestPaths sp;
  std::size_t n = inst.num_vertices();
  sp.dist.assign(n, std::nullopt);
  sp.parent.assign(n, -1);
  using Item = std::pair<Rational, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (VertexId s : sources) {
    sp.dist[s] = Rational(0);
    pq.emplace(Rational(0), s);
  }
  std::vector<char> done(n, 0), is_source(n, 0);
  for (VertexId s : sources) is_source[s] = 1;
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (blocked && (*blocked)[v] && !is_source[v]) continue;
    for (const Arc& a : inst.out_arcs(v)) {
      if (done[a.head]) continue;
      Rational nd = d + inst.cost(a.id);
      auto& cur = sp.dist[a.head];
      if (!cur || nd < *cur) {
        cur = nd;
        sp.parent[a.head] = a.id;
        pq.emplace(std::move(nd), a.head);
      }
    }
  }
  return sp;
}

Rational shortest_distance(const Instance& inst, VertexId u, VertexId v) {
  if (u == v) return Rational(0);
  VertexId src[1] = {u};
  auto sp = dijkstra(inst, src);
  if (!sp.dist[v]) throw Disconnected();
  return *sp.dist[v];
}

const std::vector<std::optional<Rational>>& MetricClosure::from(VertexId s) {
  auto& row = rows_[s];
  if (!row) {
    VertexId src[1] = {s};
    row = dijkstra(*inst_, src).dist;
  }
  return *row;
}

Rational MetricClosure::distance(VertexId u, VertexId v) {
  const auto& row = from(u);
  if (!row[v]) throw Disconnected();
  return *row[v];
}

Matrix MetricClosure::terminal_matrix() {
  auto R = inst_->terminals();
  Matrix m(R.size(), std::vector<Rational>(R.size()));
  for (std::size_t i = 0; i < R.size(); ++i) {
    const auto& row = from(R[i]);
    for (std::size_t j = 0; j < R.size(); ++j) {
      if (!row[R[j]]) throw Disconnected();
      m[i][j] = *row[R[j]];
    }
  }
  return m;
}

SpanningTree minimum_spanning_tree(const Matrix& w) {
  SpanningTree t;
  std::size_t k = w.size();
  if (k <= 1) return t;
  std::vector<char> in(k, 0);
  std::vector<int> best_from(k, 0);
  std::vector<Rational> best(k);
  in[0] = 1;
  for (std::size_t j = 1; j < k; ++j) best[j] = w[0][j];
  for (std::size_t step = 1; step < k; ++step) {
    int pick = -1;
    for (std::size_t j = 0; j < k; ++j) {
      if (in[j]) continue;
      if (pick < 0 || best[j] < best[pick]) pick = int(j);
    }
    in[pick] = 1;
    t.cost += best[pick];
    t.edges.emplace_back(std::min(best_from[pick], pick), std::max(best_from[pick], pick));
    for (std::size_t j = 0; j < k; ++j) {
      if (in[j]) continue;
      if (w[pick][j] < best[j] || (w[pick][j] == best[j] && pick < best_from[j])) {
        best[j] = w[pick][j];
        best_from[j] = pick;
      }
    }
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

TmstResult tmst(const Instance& inst, MetricClosure& metric) {
  auto R = inst.terminals();
  auto tree = minimum_spanning_tree(metric.terminal_matrix());
  TmstResult res;
  res.cost = tree.cost;
  for (auto [i, j] : tree.edges) res.edges.emplace_back(R[i], R[j]);
  return res;
}

TmstResult tmst(const Instance& inst) {
  MetricClosure metric(inst);
  return tmst(inst, metric);
}

Instance contract(const Instance& inst, std::span<const VertexId> X) {
  if (X.empty()) throw InvalidInput("contract: empty set");
  std::vector<char> in_x(inst.num_vertices(), 0);
  for (VertexId x : X) {
    if (x < 0 || std::size_t(x) >= inst.num_vertices() || !inst.is_terminal(x))
      throw InvalidInput("contract: set must consist of terminals");
    in_x[x] = 1;
  }
  VertexId rep = X[0];
  for (VertexId x : X)
    if (inst.terminal_index(x) < inst.terminal_index(rep)) rep = x;
  InstanceBuilder b;
  std::vector<VertexId> map(inst.num_vertices(), -1);
  for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v) {
    if (in_x[v] && v != rep) continue;
    map[v] = b.add_vertex(inst.name(v));
  }
  for (VertexId x : X) map[x] = map[rep];
  for (VertexId t : inst.terminals()) b.add_terminal(map[t]);
  if (inst.root()) b.set_root(map[*inst.root()]);
  for (const Edge& e : inst.edges()) b.add_edge(map[e.u], map[e.v], e.cost);
  Instance out = b.build();
  std::unordered_map<std::string, std::pair<double, double>> lay;
  for (auto& [k, xy] : inst.layout())
    if (out.find(k)) lay.emplace(k, xy);
  out.set_layout(std::move(lay));
  return out;
}

Rational drop_from_matrix(const Matrix& dist, std::span<const int> X) {
  Rational full = minimum_spanning_tree(dist).cost;
  Matrix z = dist;
  for (int a : X)
    for (int b : X) z[a][b] = Rational(0);
  return full - minimum_spanning_tree(z).cost;
}

Rational drop(const Instance& inst, std::span<const VertexId> X) {
  if (X.empty()) throw InvalidInput("drop: empty set");
  std::vector<int> idx;
  for (VertexId x : X) {
    if (x < 0 || std::size_t(x) >= inst.num_vertices() || !inst.is_terminal(x))
      throw InvalidInput("drop: set must consist of terminals");
    idx.push_back(inst.terminal_index(x));
  }
  MetricClosure metric(inst);
  return drop_from_matrix(metric.terminal_matrix(), idx);
}

SteinerResult steiner_cost(const Instance& inst, std::span<const VertexId> X, int size_cap) {
  std::vector<VertexId> xs(X.begin(), X.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.empty()) throw InvalidInput("steiner_cost: empty set");
  if (int(xs.size()) > size_cap || xs.size() > 24) throw CapacityError();
  SteinerSolver solver(inst, xs);
  std::uint32_t full = (xs.size() >= 32) ? ~0u : ((1u << xs.size()) - 1);
  auto c = solver.cost(full);
  if (!c) throw Disconnected();
  SteinerResult res;
  res.cost = *c;
  res.component = solver.tree(full);
  return res;
}

MstOptimalityReport is_mst_optimal(const Instance& inst, int component_size_cap) {
  MstOptimalityReport rep;
  auto R = inst.terminals();
  int k = int(R.size());
  int cap = std::min(component_size_cap, k);
  rep.cap = cap;
  rep.bounded = cap < k;
  if (k > 24) throw CapacityError();
  MetricClosure metric(inst);
  Matrix dist = metric.terminal_matrix();
  std::vector<VertexId> sources(R.begin(), R.end());
  SteinerSolver solver(inst, sources);
  // Subsets in order of size so cheaper witnesses are found first.
  for (int size = 3; size <= cap; ++size) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 0; m < (1u << k); ++m)
      if (__builtin_popcount(m) == size) masks.push_back(m);
    for (std::uint32_t m : masks) {
      auto c = solver.cost(m);
      std::vector<int> idx;
      for (int i = 0; i < k; ++i)
        if (m >> i & 1) idx.push_back(i);
      Rational d = drop_from_matrix(dist, idx);
      if (c && *c < d) {
        rep.mst_optimal = false;
        rep.witness = solver.tree(m);
        rep.witness_drop = d;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace moat

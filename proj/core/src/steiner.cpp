#include "moat/steiner.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace moat {

namespace {
constexpr std::int32_t kNone = std::numeric_limits<std::int32_t>::min();
}

SteinerSolver::SteinerSolver(const Instance& inst, std::vector<VertexId> sources, bool full_only)
    : inst_(&inst), sources_(std::move(sources)), full_only_(full_only) {
  if (sources_.size() > 24) throw CapacityError();
  tables_.resize(std::size_t(1) << sources_.size());
  if (full_only_) {
    blocked_.assign(inst.num_vertices(), 0);
    for (VertexId t : inst.terminals()) blocked_[t] = 1;
  }
}

void SteinerSolver::forget_size(int popcount) {
  for (std::size_t m = 0; m < tables_.size(); ++m)
    if (__builtin_popcount(unsigned(m)) == popcount) tables_[m].reset();
}

const SteinerSolver::Table& SteinerSolver::table(std::uint32_t mask) {
  auto& slot = tables_[mask];
  if (slot) return *slot;
  std::size_t n = inst_->num_vertices();
  auto t = std::make_unique<Table>();
  t->dp.assign(n, std::nullopt);
  t->back.assign(n, kNone);

  if (__builtin_popcount(mask) == 1) {
    VertexId s = sources_[__builtin_ctz(mask)];
    VertexId src[1] = {s};
    auto sp = dijkstra(*inst_, src, full_only_ ? &blocked_ : nullptr);
    for (std::size_t v = 0; v < n; ++v) {
      if (full_only_ && blocked_[v]) continue;
      t->dp[v] = std::move(sp.dist[v]);
      t->back[v] = sp.parent[v] >= 0 ? sp.parent[v] : kNone;
    }
    if (!full_only_) t->back[s] = kNone;
    slot = std::move(t);
    return *slot;
  }

  std::uint32_t low = mask & (~mask + 1);
  for (std::uint32_t a = (mask - 1) & mask; a > 0; a = (a - 1) & mask) {
    if (!(a & low)) continue;
    const Table& ta = table(a);
    const Table& tb = table(mask ^ a);
    for (std::size_t v = 0; v < n; ++v) {
      if (!ta.dp[v] || !tb.dp[v]) continue;
      Rational c = *ta.dp[v] + *tb.dp[v];
      if (!t->dp[v] || c < *t->dp[v]) {
        t->dp[v] = std::move(c);
        t->back[v] = -std::int32_t(a) - 1;
      }
    }
  }

  using Item = std::pair<Rational, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t v = 0; v < n; ++v)
    if (t->dp[v]) pq.emplace(*t->dp[v], VertexId(v));
  std::vector<char> done(n, 0);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (const Arc& arc : inst_->out_arcs(v)) {
      VertexId w = arc.head;
      if (done[w] || (full_only_ && blocked_[w])) continue;
      Rational nd = d + inst_->cost(arc.id);
      if (!t->dp[w] || nd < *t->dp[w]) {
        t->dp[w] = nd;
        t->back[w] = arc.id;
        pq.emplace(std::move(nd), w);
      }
    }
  }
  slot = std::move(t);
  return *slot;
}

std::optional<Rational> SteinerSolver::cost(std::uint32_t mask) {
  if (mask == 0) return Rational(0);
  if (__builtin_popcount(mask) == 1) return Rational(0);
  const Table& t = table(mask);
  std::optional<Rational> best;
  for (const auto& d : t.dp)
    if (d && (!best || *d < *best)) best = *d;
  if (full_only_ && __builtin_popcount(mask) == 2) {
    VertexId x = sources_[__builtin_ctz(mask)];
    VertexId y = sources_[31 - __builtin_clz(mask)];
    if (auto e = inst_->find_edge(x, y)) {
      const Rational& c = inst_->edge(*e).cost;
      if (!best || c < *best) best = c;
    }
  }
  return best;
}

void SteinerSolver::collect(std::uint32_t mask, VertexId v, std::vector<char>& used, std::vector<EdgeId>& out) {
  std::vector<std::pair<std::uint32_t, VertexId>> stack{{mask, v}};
  while (!stack.empty()) {
    auto [m, u] = stack.back();
    stack.pop_back();
    const Table& t = table(m);
    std::int32_t b = t.back[u];
    if (b == kNone) continue;
    if (b >= 0) {
      EdgeId e = edge_of(b);
      if (!used[e]) {
        used[e] = 1;
        out.push_back(e);
      }
      stack.emplace_back(m, inst_->tail(b));
    } else {
      std::uint32_t a = std::uint32_t(-(b + 1));
      stack.emplace_back(a, u);
      stack.emplace_back(m ^ a, u);
    }
  }
}

Component SteinerSolver::tree(std::uint32_t mask) {
  Component comp;
  for (std::size_t i = 0; i < sources_.size(); ++i)
    if (mask >> i & 1) comp.terminals.push_back(sources_[i]);
  if (__builtin_popcount(mask) <= 1) return comp;
  auto best = cost(mask);
  if (!best) throw Disconnected();
  const Table& t = table(mask);
  std::vector<char> used(inst_->num_edges(), 0);
  VertexId arg = -1;
  for (std::size_t v = 0; v < t.dp.size(); ++v)
    if (t.dp[v] && *t.dp[v] == *best) {
      arg = VertexId(v);
      break;
    }
  if (arg < 0) {
    // full mode, two sources joined by a direct edge
    VertexId x = comp.terminals[0], y = comp.terminals[1];
    comp.edges.push_back(*inst_->find_edge(x, y));
  } else {
    collect(mask, arg, used, comp.edges);
  }
  std::sort(comp.edges.begin(), comp.edges.end());
  for (EdgeId e : comp.edges) comp.cost += inst_->edge(e).cost;
  return comp;
}

}  // namespace moat

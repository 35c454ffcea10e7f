#include "moat/random.hpp"

#include <algorithm>

namespace moat {

Instance random_instance(Rng& rng, const RandomInstanceSpec& spec) {
  if (spec.vertices < 1 || spec.terminals < 1 || spec.terminals > spec.vertices)
    throw InvalidInput("bad random instance parameters");
  InstanceBuilder b;
  for (int i = 0; i < spec.vertices; ++i) b.add_vertex("v" + std::to_string(i));
  std::uniform_int_distribution<int> cost(1, spec.max_cost);
  for (int i = 1; i < spec.vertices; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    b.add_edge(VertexId(i), VertexId(pick(rng)), Rational(cost(rng)));
  }
  std::uniform_int_distribution<int> any(0, spec.vertices - 1);
  for (int e = 0; e < spec.extra_edges; ++e) b.add_edge(VertexId(any(rng)), VertexId(any(rng)), Rational(cost(rng)));
  int stride = spec.vertices / spec.terminals;
  for (int i = 0; i < spec.terminals; ++i) b.add_terminal(VertexId(i * stride));
  b.set_root(VertexId(0));
  return b.build();
}

Instance random_hub_instance(Rng& rng, const RandomInstanceSpec& spec) {
  int hubs = spec.vertices - spec.terminals;
  if (spec.terminals < 1 || hubs < 1 || spec.max_cost < 2) throw InvalidInput("bad random instance parameters");
  InstanceBuilder b;
  for (int i = 0; i < spec.terminals; ++i) b.add_terminal(b.add_vertex("t" + std::to_string(i)));
  for (int i = 0; i < hubs; ++i) b.add_vertex("h" + std::to_string(i));
  auto hub = [&](int i) { return VertexId(spec.terminals + i); };
  std::uniform_int_distribution<int> cheap(1, spec.max_cost / 2), dear(spec.max_cost, 2 * spec.max_cost);
  std::uniform_int_distribution<int> any_hub(0, hubs - 1), any_term(0, spec.terminals - 1);
  for (int i = 1; i < hubs; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    b.add_edge(hub(i), hub(pick(rng)), Rational(cheap(rng)));
  }
  for (int t = 0; t < spec.terminals; ++t) {
    b.add_edge(VertexId(t), hub(any_hub(rng)), Rational(cheap(rng)));
    if (rng() % 2) b.add_edge(VertexId(t), hub(any_hub(rng)), Rational(cheap(rng)));
  }
  for (int e = 0; e < spec.extra_edges; ++e) {
    if (rng() % 2) b.add_edge(VertexId(any_term(rng)), VertexId(any_term(rng)), Rational(dear(rng)));
    else b.add_edge(hub(any_hub(rng)), hub(any_hub(rng)), Rational(dear(rng)));
  }
  b.set_root(VertexId(0));
  return b.build();
}

std::vector<std::string> terminal_labels(const Instance& inst) {
  std::vector<std::string> out;
  for (VertexId t : inst.terminals()) out.push_back(inst.name(t));
  return out;
}

MergePlan random_ultrametric(Rng& rng, const std::vector<std::string>& labels, int max_half) {
  return random_ultrametric(rng, labels, Rational(max_half, 2), max_half);
}

MergePlan random_ultrametric(Rng& rng, const std::vector<std::string>& labels, const Rational& max, int grid) {
  // Random dendrogram: merge two random clusters at each of k-1 sorted random times.
  std::size_t k = labels.size();
  std::uniform_int_distribution<int> w(0, grid);
  std::vector<Rational> times;
  for (std::size_t i = 0; i + 1 < k; ++i) times.push_back(max * Rational(w(rng), grid));
  std::sort(times.begin(), times.end());
  std::vector<std::vector<int>> clusters;
  for (std::size_t i = 0; i < k; ++i) clusters.push_back({int(i)});
  Matrix m(k, std::vector<Rational>(k));
  for (const Rational& t : times) {
    std::uniform_int_distribution<std::size_t> pick(0, clusters.size() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    for (int x : clusters[a])
      for (int y : clusters[b]) m[x][y] = m[y][x] = t;
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + std::ptrdiff_t(b));
  }
  return MergePlan(labels, m);
}

Instance random_mst_optimal(Rng& rng, const RandomInstanceSpec& spec, int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    Instance inst = random_instance(rng, spec);
    if (is_mst_optimal(inst).mst_optimal) return inst;
  }
  throw Error("no MST-optimal instance found");
}

}  // namespace moat

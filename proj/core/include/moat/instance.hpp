#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "moat/rational.hpp"

namespace moat {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
// Directed arc 2e runs u->v of edge e, arc 2e+1 runs v->u.
using ArcId = std::int32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidInput : public Error {
 public:
  using Error::Error;
};
class Disconnected : public Error {
 public:
  Disconnected() : Error("disconnected") {}
  using Error::Error;
};
class CapacityError : public Error {
 public:
  CapacityError() : Error("instance too large for exact oracle") {}
  using Error::Error;
};

struct Edge {
  VertexId u;
  VertexId v;
  Rational cost;
};

struct Arc {
  VertexId head;
  ArcId id;
};

inline constexpr ArcId twin(ArcId a) { return a ^ 1; }
inline constexpr EdgeId edge_of(ArcId a) { return a >> 1; }

// Immutable Steiner tree instance: undirected graph, positive rational
// costs, a terminal set and an optional root terminal.
class Instance {
 public:
  Instance() = default;

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_arcs() const { return 2 * edges_.size(); }

  const std::string& name(VertexId v) const { return names_[v]; }
  std::optional<VertexId> find(std::string_view name) const;
  VertexId id(std::string_view name) const;

  std::span<const VertexId> terminals() const { return terminals_; }
  std::size_t num_terminals() const { return terminals_.size(); }
  bool is_terminal(VertexId v) const { return terminal_index_[v] >= 0; }
  // Position of v in terminals(), or -1.
  int terminal_index(VertexId v) const { return terminal_index_[v]; }

  std::optional<VertexId> root() const { return root_; }
  VertexId root_or_first() const { return root_ ? *root_ : terminals_.front(); }
  Instance with_root(std::optional<VertexId> r) const;

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  VertexId tail(ArcId a) const { return (a & 1) ? edges_[a >> 1].v : edges_[a >> 1].u; }
  VertexId head(ArcId a) const { return (a & 1) ? edges_[a >> 1].u : edges_[a >> 1].v; }
  const Rational& cost(ArcId a) const { return edges_[a >> 1].cost; }
  std::span<const Arc> out_arcs(VertexId v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

  // Optional drawing coordinates carried through IO.
  const std::unordered_map<std::string, std::pair<double, double>>& layout() const { return layout_; }
  void set_layout(std::unordered_map<std::string, std::pair<double, double>> layout) {
    layout_ = std::move(layout);
  }

 private:
  friend class InstanceBuilder;
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<VertexId> terminals_;
  std::vector<int> terminal_index_;
  std::optional<VertexId> root_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  std::unordered_map<std::string, std::pair<double, double>> layout_;
};

class InstanceBuilder {
 public:
  // Returns the existing id if the name is already present.
  VertexId add_vertex(std::string name);
  bool has_vertex(std::string_view name) const { return index_.count(std::string(name)) != 0; }
  VertexId vertex(std::string_view name) const;
  // Loops are ignored; parallel edges keep the cheaper cost.
  void add_edge(VertexId u, VertexId v, Rational cost);
  void add_edge(std::string_view u, std::string_view v, Rational cost) {
    add_edge(add_vertex(std::string(u)), add_vertex(std::string(v)), std::move(cost));
  }
  void add_terminal(VertexId v);
  void set_root(std::optional<VertexId> r) { root_ = r; }
  std::size_t num_vertices() const { return names_.size(); }

  // Validates: at least one terminal, positive costs, terminals connected,
  // root is a terminal.
  Instance build() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<VertexId> terminals_;
  std::vector<char> is_terminal_;
  std::optional<VertexId> root_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
};

// Single-source shortest paths with rational keys; ties broken by vertex id.
struct ShortestPaths {
  std::vector<std::optional<Rational>> dist;
  std::vector<ArcId> parent;  // arc into v on a shortest path, -1 at sources
};
ShortestPaths dijkstra(const Instance& inst, std::span<const VertexId> sources,
                       const std::vector<char>* blocked = nullptr);

Rational shortest_distance(const Instance& inst, VertexId u, VertexId v);

// Lazily materialized metric closure. Not thread-safe; one per thread.
class MetricClosure {
 public:
  explicit MetricClosure(const Instance& inst) : inst_(&inst), rows_(inst.num_vertices()) {}
  const std::vector<std::optional<Rational>>& from(VertexId s);
  Rational distance(VertexId u, VertexId v);
  // dist between terminals i and j (indices into terminals()).
  std::vector<std::vector<Rational>> terminal_matrix();

 private:
  const Instance* inst_;
  std::vector<std::optional<std::vector<std::optional<Rational>>>> rows_;
};

// Symmetric matrix helpers used for terminal metrics and merge times.
using Matrix = std::vector<std::vector<Rational>>;

struct SpanningTree {
  Rational cost;
  std::vector<std::pair<int, int>> edges;  // index pairs into the matrix
};
// Prim's algorithm on a complete graph given by a symmetric matrix. Ties
// pick the lexicographically smallest (i, j).
SpanningTree minimum_spanning_tree(const Matrix& w);

struct TmstResult {
  Rational cost;
  std::vector<std::pair<VertexId, VertexId>> edges;
};
TmstResult tmst(const Instance& inst);
TmstResult tmst(const Instance& inst, MetricClosure& metric);

// The merged vertex keeps the name and vertex slot of the member of X that
// comes first in terminals().
Instance contract(const Instance& inst, std::span<const VertexId> X);

Rational drop(const Instance& inst, std::span<const VertexId> X);
// drop computed on a terminal distance matrix; X holds terminal indices.
Rational drop_from_matrix(const Matrix& dist, std::span<const int> X);

struct Component {
  std::vector<EdgeId> edges;
  std::vector<VertexId> terminals;
  Rational cost;
};

inline constexpr int kDefaultSteinerCap = 12;
inline constexpr int kDefaultComponentCap = 6;

struct SteinerResult {
  Rational cost;
  Component component;
};
// Dreyfus-Wagner. X may contain Steiner vertices as pseudo-terminals.
SteinerResult steiner_cost(const Instance& inst, std::span<const VertexId> X,
                           int size_cap = kDefaultSteinerCap);

struct MstOptimalityReport {
  bool mst_optimal = true;
  bool bounded = false;  // cap smaller than |R|: verification is bounded only
  int cap = 0;
  std::optional<Component> witness;
  Rational witness_drop;
};
MstOptimalityReport is_mst_optimal(const Instance& inst, int component_size_cap = kDefaultSteinerCap);

}  // namespace moat

#pragma once

#include <optional>

#include "moat/instance.hpp"
#include "moat/lp.hpp"

namespace moat {

inline constexpr int kDefaultBcrVertexCap = 14;
inline constexpr int kDefaultHypTerminalCap = 6;
inline constexpr int kDefaultOptTerminalCap = 12;

// Optimum of the bidirected cut relaxation, solved through its packing dual
// over all cuts S of V - r with S meeting R. Throws CapacityError above the cap.
Rational bcr_value(const Instance& inst, std::optional<VertexId> root = {}, int vertex_cap = kDefaultBcrVertexCap);
// Hypergraphic relaxation over all (X, v) with X a terminal subset, solved
// through its dual over terminal cuts. cost(X) is the Steiner tree cost of X.
Rational hyp_value(const Instance& inst, std::optional<VertexId> root = {},
                   int terminal_cap = kDefaultHypTerminalCap);
Rational opt_value(const Instance& inst, int terminal_cap = kDefaultOptTerminalCap);

struct OracleCaps {
  int bcr_vertices = kDefaultBcrVertexCap;
  int hyp_terminals = kDefaultHypTerminalCap;
  int opt_terminals = kDefaultOptTerminalCap;
};
// Defaults, with every cap replaced by MOATLAB_CAP if that is set.
OracleCaps caps_from_env();

struct OracleChain {
  Rational tmst, bcr, hyp, opt;
  bool mst_optimal = false;
  // TMST/2 <= BCR <= HYP <= OPT <= TMST
  bool holds = false;
  bool hyp_equals_opt = false;
};
OracleChain oracle_chain(const Instance& inst, const OracleCaps& caps = {});

}  // namespace moat

#include "moat/oracles.hpp"

#include <cstdlib>
#include <string>

#include "moat/steiner.hpp"

namespace moat {

namespace {

VertexId pick_root(const Instance& inst, std::optional<VertexId> root) {
  VertexId r = root ? *root : inst.root_or_first();
  if (!inst.is_terminal(r)) throw InvalidInput("root must be a terminal");
  return r;
}

Rational packing_optimum(LinearProgram lp) {
  auto res = solve_lp(lp);
  if (res.status != LpStatus::kOptimal) throw Error("oracle LP did not reach an optimum");
  return res.value;
}

}  // namespace

Rational bcr_value(const Instance& inst, std::optional<VertexId> root, int vertex_cap) {
  if (int(inst.num_vertices()) > vertex_cap || inst.num_vertices() > 24) throw CapacityError();
  VertexId r = pick_root(inst, root);
  if (inst.num_terminals() == 1) return Rational(0);
  std::vector<VertexId> others;
  for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v)
    if (v != r) others.push_back(v);
  std::vector<std::uint32_t> cuts;
  for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << others.size()); ++mask) {
    bool meets = false;
    for (std::size_t i = 0; i < others.size() && !meets; ++i)
      meets = (mask >> i & 1) && inst.is_terminal(others[i]);
    if (meets) cuts.push_back(mask);
  }
  std::vector<int> pos(inst.num_vertices(), -1);
  for (std::size_t i = 0; i < others.size(); ++i) pos[others[i]] = int(i);
  auto inside = [&](std::uint32_t mask, VertexId v) { return pos[v] >= 0 && (mask >> pos[v] & 1); };

  // max sum y_S  s.t.  sum_{S : a leaves S} y_S <= c(a) for every arc a
  LinearProgram lp;
  lp.objective.assign(cuts.size(), Rational(1));
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a) {
    LpRow row;
    row.coeffs.assign(cuts.size(), Rational(0));
    VertexId t = inst.tail(a), h = inst.head(a);
    for (std::size_t j = 0; j < cuts.size(); ++j)
      if (inside(cuts[j], t) && !inside(cuts[j], h)) row.coeffs[j] = Rational(1);
    row.rhs = inst.cost(a);
    lp.rows.push_back(std::move(row));
  }
  return packing_optimum(std::move(lp));
}

Rational hyp_value(const Instance& inst, std::optional<VertexId> root, int terminal_cap) {
  std::size_t k = inst.num_terminals();
  if (int(k) > terminal_cap || k > 16) throw CapacityError();
  VertexId r = pick_root(inst, root);
  if (k == 1) return Rational(0);
  int ri = inst.terminal_index(r);
  std::vector<VertexId> terms(inst.terminals().begin(), inst.terminals().end());
  SteinerSolver solver(inst, terms);
  std::vector<std::uint32_t> cuts;
  for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << k); ++mask)
    if (!(mask >> ri & 1)) cuts.push_back(mask);

  // max sum y_S  s.t.  sum_{S : X meets S, v outside S} y_S <= cost(X) for every (X, v)
  LinearProgram lp;
  lp.objective.assign(cuts.size(), Rational(1));
  for (std::uint32_t X = 1; X < (std::uint32_t(1) << k); ++X) {
    if (__builtin_popcount(X) < 2) continue;
    auto c = solver.cost(X);
    if (!c) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if (!(X >> v & 1)) continue;
      LpRow row;
      row.coeffs.assign(cuts.size(), Rational(0));
      for (std::size_t j = 0; j < cuts.size(); ++j)
        if ((X & cuts[j]) && !(cuts[j] >> v & 1)) row.coeffs[j] = Rational(1);
      row.rhs = *c;
      lp.rows.push_back(std::move(row));
    }
  }
  return packing_optimum(std::move(lp));
}

Rational opt_value(const Instance& inst, int terminal_cap) {
  if (int(inst.num_terminals()) > terminal_cap) throw CapacityError();
  if (inst.num_terminals() == 1) return Rational(0);
  return steiner_cost(inst, inst.terminals(), terminal_cap).cost;
}

OracleCaps caps_from_env() {
  OracleCaps caps;
  if (const char* env = std::getenv("MOATLAB_CAP")) {
    try {
      int c = std::stoi(env);
      if (c > 0) caps.bcr_vertices = caps.hyp_terminals = caps.opt_terminals = c;
    } catch (const std::exception&) {
      throw InvalidInput(std::string("MOATLAB_CAP is not an integer: ") + env);
    }
  }
  return caps;
}

OracleChain oracle_chain(const Instance& inst, const OracleCaps& caps) {
  OracleChain c;
  c.tmst = tmst(inst).cost;
  c.bcr = bcr_value(inst, {}, caps.bcr_vertices);
  c.hyp = hyp_value(inst, {}, caps.hyp_terminals);
  c.opt = opt_value(inst, caps.opt_terminals);
  c.mst_optimal = c.opt == c.tmst;
  c.holds = c.tmst / Rational(2) <= c.bcr && c.bcr <= c.hyp && c.hyp <= c.opt && c.opt <= c.tmst;
  c.hyp_equals_opt = c.hyp == c.opt;
  return c;
}

}  // namespace moat

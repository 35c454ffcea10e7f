#pragma once

#include <string>
#include <vector>

#include "moat/instance.hpp"
#include "moat/merge_plan.hpp"

namespace moat {

// Builders add a gadget between existing vertices and return the id of w.
// New vertices are named prefix + "x<j>" (3x) or prefix + "x<j>" / prefix + "t<j>x<i>" (jump).
// If w is given it is used as the distinguished vertex.
VertexId add_three_x_gadget(InstanceBuilder& b, VertexId s, VertexId s_star, int k, const std::string& prefix,
                            std::optional<VertexId> w = std::nullopt);
VertexId add_jump_gadget(InstanceBuilder& b, VertexId s, VertexId s_prime, VertexId s_star, int k,
                         const std::string& prefix, std::optional<VertexId> w = std::nullopt);

// Standalone gadgets with terminals "s", "s*" (and "s'" for the jump gadget).
struct Gadget {
  Instance instance;
  VertexId w = -1;
  int k = 0;
};
Gadget three_x_gadget(int k);
Gadget jump_gadget(int k);

// k = ceil(1/(6 eps)).
int gadget_k(const Rational& eps);

// Terminals r0..r{n-1}, root r0. One central vertex per ordered pair (s, s')
// and a jump gadget from every other terminal to it.
Instance lower_bound_instance(int terminals, const Rational& eps);
// Name of the central vertex of the pair (s, s') given as terminal indices.
std::string central_vertex_name(int s, int s_prime);

enum class GadgetKind { kThreeX, kJump };

struct GadgetCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};
struct GadgetReport {
  bool ok = true;
  std::vector<GadgetCheck> checks;
};

// Distances, component bounds and atf values stated for the gadget. The
// growth checks run with plan, which must be labelled by the gadget's
// terminals; the atf claims are only asserted when the plan's merge times
// allow them.
GadgetReport verify_gadget_lemma(const Gadget& g, GadgetKind kind, const MergePlan& plan);
// Runs the static checks plus the growth checks for a fixed family of plans.
GadgetReport verify_gadget_lemma(const Gadget& g, GadgetKind kind);

}  // namespace moat

#pragma once

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "moat/instance.hpp"
#include "moat/merge_plan.hpp"

namespace testing {

using EdgeSpec = std::tuple<std::string, std::string, moat::Rational>;

inline moat::Instance make_instance(std::initializer_list<EdgeSpec> edges,
                                    std::initializer_list<std::string> terminals,
                                    std::optional<std::string> root = std::nullopt) {
  moat::InstanceBuilder b;
  for (const auto& [u, v, c] : edges) b.add_edge(u, v, c);
  for (const auto& t : terminals) b.add_terminal(b.add_vertex(t));
  if (root) b.set_root(b.vertex(*root));
  return b.build();
}

inline moat::Rational q(long long p, long long d = 1) { return moat::Rational(p, d); }

// Two-terminal plan with one merge time.
inline moat::MergePlan pair_plan(const std::string& a, const std::string& b, moat::Rational t) {
  return moat::MergePlan({a, b}, moat::Matrix{{0, t}, {t, 0}});
}

}  // namespace testing

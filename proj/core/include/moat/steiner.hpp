#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "moat/instance.hpp"

namespace moat {

// Dreyfus-Wagner over subsets of a fixed source list, memoized per mask.
// In full mode every vertex of the instance's terminal set may only be a
// leaf, so cost(mask) is the cheapest full component on that subset.
class SteinerSolver {
 public:
  SteinerSolver(const Instance& inst, std::vector<VertexId> sources, bool full_only = false);

  const std::vector<VertexId>& sources() const { return sources_; }
  std::optional<Rational> cost(std::uint32_t mask);
  // Witness tree for cost(mask); empty if mask is a single source.
  Component tree(std::uint32_t mask);
  // Drops memoized tables of the given size to bound memory.
  void forget_size(int popcount);

 private:
  struct Table {
    std::vector<std::optional<Rational>> dp;
    std::vector<std::int32_t> back;
  };
  const Table& table(std::uint32_t mask);
  void collect(std::uint32_t mask, VertexId v, std::vector<char>& used, std::vector<EdgeId>& out);

  const Instance* inst_;
  std::vector<VertexId> sources_;
  bool full_only_;
  std::vector<char> blocked_;
  std::vector<std::unique_ptr<Table>> tables_;
};

}  // namespace moat

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moat/instance.hpp"
#include "moat/rational.hpp"

namespace moat {

// One set of the laminar family generated by a merge plan. The set is a
// part of S^t exactly for activation < t <= deactivation.
struct PlanSet {
  std::vector<int> members;  // sorted terminal indices
  Rational activation;
  std::optional<Rational> deactivation;  // empty for the final set R
  int parent = -1;
  std::vector<int> children;
};

struct Dendrogram {
  std::vector<PlanSet> sets;  // leaves first, in terminal order
  int top = -1;
  int leaf(int terminal) const { return terminal; }
  // Smallest set containing all of X (terminal indices).
  int lowest_common(std::span<const int> X) const;
};

// Ultrametric merge-time matrix on labelled terminals.
class MergePlan {
 public:
  MergePlan() = default;
  // Throws InvalidInput unless times is symmetric, zero on the diagonal,
  // nonnegative and ultrametric.
  MergePlan(std::vector<std::string> labels, Matrix times);
  static MergePlan trivial(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index(std::string_view label) const;
  const Rational& time(int i, int j) const { return times_[i][j]; }
  const Matrix& times() const { return times_; }
  const Dendrogram& dendrogram() const { return dendrogram_; }
  Rational max_time() const;

 private:
  std::vector<std::string> labels_;
  Matrix times_;
  Dendrogram dendrogram_;
};

bool is_ultrametric(const Matrix& m);

// Parts of S^t: connected components of {merge < t}.
std::vector<std::vector<int>> partition_at(const MergePlan& plan, const Rational& t);

Rational value(const MergePlan& plan);
Rational local_value(const MergePlan& plan, std::span<const int> X);

// M_u: merge time = minimax path value under u.
MergePlan from_upper_bound(std::vector<std::string> labels, const Matrix& u);
// M_{dist/2}; labels are the instance's terminal names in terminal order.
MergePlan canonical_plan(const Instance& inst);
MergePlan canonical_plan(const Instance& inst, MetricClosure& metric);
MergePlan scale(const MergePlan& plan, const Rational& factor);
// M/X. The merged terminal keeps the label and slot of X's first member.
MergePlan contract_plan(const MergePlan& plan, std::span<const int> X);

struct GammaReport {
  bool good = true;
  bool strictly_good = true;
  bool bounded = false;
  int cap = 0;
  // First pair violating merge <= (7-5g)/12 dist, resp. the strict version.
  std::optional<std::pair<int, int>> pair_violation;
  std::optional<std::pair<int, int>> strict_pair_violation;
  // First cheap set without an early-merging pair, resp. the strict version.
  std::optional<std::vector<int>> set_violation;
  std::optional<std::vector<int>> strict_set_violation;
  int cheap_sets = 0;
};

inline constexpr int kDefaultGammaCap = 16;

GammaReport classify_gamma(const MergePlan& plan, const Instance& inst, const Rational& gamma,
                           int subset_cap = kDefaultGammaCap);

}  // namespace moat

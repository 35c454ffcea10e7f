#include <functional>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "moat/random.hpp"
#include "moat/steiner.hpp"

using namespace moat;
using testing::make_instance;
using testing::q;

namespace {

std::vector<std::string> names(int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back("t" + std::to_string(i));
  return out;
}

Matrix random_upper_bound(Rng& rng, int k) {
  std::uniform_int_distribution<int> w(0, 12);
  Matrix u(k, std::vector<Rational>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) u[i][j] = u[j][i] = Rational(w(rng), 2);
  return u;
}

// Min over all simple paths of the max edge.
Rational minimax_brute(const Matrix& u, int s, int t) {
  int k = int(u.size());
  std::optional<Rational> best;
  std::vector<char> seen(k, 0);
  std::function<void(int, Rational)> dfs = [&](int v, Rational m) {
    if (v == t) {
      if (!best || m < *best) best = m;
      return;
    }
    seen[v] = 1;
    for (int w = 0; w < k; ++w)
      if (!seen[w]) dfs(w, std::max(m, u[v][w]));
    seen[v] = 0;
  };
  dfs(s, Rational(0));
  return *best;
}

// Integral of (|parts meeting X| - 1) by sweeping the sorted merge times.
Rational sweep(const MergePlan& plan, const std::vector<int>& X) {
  std::set<Rational> cuts{Rational(0)};
  for (std::size_t i = 0; i < plan.size(); ++i)
    for (std::size_t j = 0; j < plan.size(); ++j) cuts.insert(plan.time(int(i), int(j)));
  Rational total, prev;
  for (const Rational& t : cuts) {
    if (t == 0) continue;
    Rational mid = (prev + t) / Rational(2);
    auto parts = partition_at(plan, mid);
    int meeting = 0;
    for (const auto& p : parts) {
      bool hit = false;
      for (int x : p) hit = hit || std::find(X.begin(), X.end(), x) != X.end();
      meeting += hit;
    }
    total += (t - prev) * Rational(meeting - 1);
    prev = t;
  }
  return total;
}

std::vector<int> all_of(const MergePlan& p) {
  std::vector<int> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(int(i));
  return out;
}

}  // namespace

TEST_CASE("mergeplan: rejects non-ultrametric input") {
  Matrix bad{{q(0), q(1), q(3)}, {q(1), q(0), q(1)}, {q(3), q(1), q(0)}};
  CHECK_THROWS_AS(MergePlan(names(3), bad), InvalidInput);
  Matrix asym{{q(0), q(1)}, {q(2), q(0)}};
  CHECK_THROWS_AS(MergePlan(names(2), asym), InvalidInput);
  CHECK(value(MergePlan::trivial({"a"})) == 0);
}

TEST_CASE("mergeplan: from_upper_bound realizes the min-max path value") {
  Rng rng(1);
  for (int it = 0; it < 30; ++it) {
    int k = 2 + it % 6;
    auto u = random_upper_bound(rng, k);
    auto plan = from_upper_bound(names(k), u);
    CHECK(is_ultrametric(plan.times()));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) CHECK(plan.time(i, j) == minimax_brute(u, i, j));
    CHECK(value(plan) == minimum_spanning_tree(u).cost);
    CHECK(minimum_spanning_tree(plan.times()).cost == minimum_spanning_tree(u).cost);
  }
  Matrix zero(3, std::vector<Rational>(3));
  CHECK(value(from_upper_bound(names(3), zero)) == 0);
}

TEST_CASE("mergeplan: value and local value agree with a partition sweep") {
  Rng rng(2);
  for (int it = 0; it < 30; ++it) {
    int k = 2 + it % 6;
    auto plan = random_ultrametric(rng, names(k));
    CHECK(value(plan) == sweep(plan, all_of(plan)));
    CHECK(local_value(plan, all_of(plan)) == value(plan));
    std::vector<int> X;
    for (int i = 0; i < k; ++i)
      if (rng() % 2) X.push_back(i);
    if (X.empty()) X.push_back(0);
    CHECK(local_value(plan, X) == sweep(plan, X));
  }
}

TEST_CASE("mergeplan: canonical plan value and drop identity") {
  Rng rng(3);
  for (int it = 0; it < 20; ++it) {
    auto inst = random_instance(rng, {9, 2 + it % 5, 6, 9});
    auto plan = canonical_plan(inst);
    Rational t = tmst(inst).cost;
    CHECK(value(plan) * 2 == t);
    CHECK(value(scale(plan, q(7, 6))) == q(7, 12) * t);
    CHECK(value(scale(plan, q(1))) == value(plan));
    std::vector<int> X;
    std::vector<VertexId> Xv;
    for (std::size_t i = 0; i < inst.num_terminals(); ++i)
      if (rng() % 2) {
        X.push_back(int(i));
        Xv.push_back(inst.terminals()[i]);
      }
    if (X.empty()) continue;
    CHECK(drop(inst, Xv) == 2 * local_value(plan, X));
  }
  CHECK_THROWS_AS(scale(MergePlan::trivial({"a", "b"}), q(0)), InvalidInput);
}

TEST_CASE("mergeplan: contraction identities") {
  Rng rng(4);
  for (int it = 0; it < 30; ++it) {
    int k = 2 + it % 6;
    auto u = random_upper_bound(rng, k);
    auto plan = from_upper_bound(names(k), u);
    std::vector<int> X;
    for (int i = 0; i < k; ++i)
      if (rng() % 2) X.push_back(i);
    if (X.empty()) X.push_back(k - 1);
    auto contracted = contract_plan(plan, X);
    CHECK(value(plan) - value(contracted) == local_value(plan, X));
    // M_u / X = M_{u_X} with u_X(a, X) = min over x in X of u(a, x).
    std::vector<std::string> labels;
    std::vector<int> rep;
    for (int i = 0; i < k; ++i)
      if (std::find(X.begin(), X.end(), i) == X.end() || i == X.front()) {
        labels.push_back(names(k)[i]);
        rep.push_back(i);
      }
    std::size_t m = labels.size();
    Matrix ux(m, std::vector<Rational>(m));
    auto in_x = [&](int i) { return std::find(X.begin(), X.end(), i) != X.end(); };
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        std::optional<Rational> best;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            bool ia = in_x(rep[a]) ? in_x(i) : i == rep[a];
            bool jb = in_x(rep[b]) ? in_x(j) : j == rep[b];
            if (ia && jb && i != j && (!best || u[i][j] < *best)) best = u[i][j];
          }
        ux[a][b] = *best;
      }
    auto direct = from_upper_bound(labels, ux);
    REQUIRE(direct.size() == contracted.size());
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        CHECK(direct.time(int(a), int(b)) ==
              contracted.time(contracted.index(labels[a]), contracted.index(labels[b])));
  }
  auto plan = from_upper_bound(names(3), random_upper_bound(rng, 3));
  CHECK(contract_plan(plan, all_of(plan)).size() == 1);
}

TEST_CASE("mergeplan: superadditivity of local value") {
  // {t0, t1} merge at 1 and stay apart from t2 until 4; X = {t0}, Xbar = {t2}, S = {t0, t1} active at 1/2.
  Matrix m{{q(0), q(1), q(4)}, {q(1), q(0), q(4)}, {q(4), q(4), q(0)}};
  MergePlan plan(names(3), m);
  std::vector<int> X{0}, Xb{2}, both{0, 2};
  Rational tstar(1, 2);
  CHECK(local_value(plan, both) >= local_value(plan, X) + local_value(plan, Xb) + tstar);
}

TEST_CASE("mergeplan: gamma classification") {
  Rng rng(5);
  for (int it = 0; it < 10; ++it) {
    auto inst = random_mst_optimal(rng, {8, 4, 4, 9});
    auto plan = scale(canonical_plan(inst), q(7, 6));
    auto rep = classify_gamma(plan, inst, q(0));
    CHECK(rep.good);
    CHECK(rep.cheap_sets == 0);
    auto strict = classify_gamma(scale(plan, q(99, 100)), inst, q(0));
    CHECK(strict.strictly_good);
    std::vector<std::string> labels;
    for (VertexId t : inst.terminals()) labels.push_back(inst.name(t));
    CHECK(classify_gamma(MergePlan::trivial(labels), inst, q(0)).good);
    // Pushing every merge beyond 7/12 dist breaks the pair condition.
    auto late = scale(canonical_plan(inst), q(3, 2));
    CHECK_FALSE(classify_gamma(late, inst, q(0)).good);
  }
}

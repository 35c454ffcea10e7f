#include "doctest.h"
#include "helpers.hpp"
#include "moat/good_plan.hpp"
#include "moat/growth.hpp"
#include "moat/oracles.hpp"
#include "moat/random.hpp"
#include "moat/steiner.hpp"
#include "moat/subdivide.hpp"

using namespace moat;
using testing::make_instance;
using testing::q;

namespace {

// Star on a, b, c with center m, plus d hanging off a.
Instance star_with_tail() {
  return make_instance({{"a", "m", q(1)}, {"b", "m", q(1)}, {"c", "m", q(1)}, {"a", "d", q(4)}}, {"a", "b", "c", "d"},
                       "a");
}

}  // namespace

TEST_CASE("goodplan: MST-optimal input gives an empty run") {
  auto inst = make_instance({{"a", "b", q(2)}, {"b", "c", q(2)}}, {"a", "b", "c"});
  auto run = relative_greedy(inst);
  CHECK(run.steps.empty());
  CHECK_FALSE(run.bounded);
  auto f = rho(run);
  CHECK(f(q(0)) == 0);
  CHECK(f(q(1, 10)) == 0);
}

TEST_CASE("goodplan: the star is contracted first") {
  auto inst = star_with_tail();
  auto run = relative_greedy(inst);
  REQUIRE(run.steps.size() == 1);
  CHECK(run.steps[0].terminals == std::vector<std::string>{"a", "b", "c"});
  CHECK(run.steps[0].cost == 3);
  CHECK(run.steps[0].drop == 4);
  CHECK(run.steps[0].ratio == q(3, 4));
  CHECK(run.tmst == 8);
  CHECK(tmst(run.graphs.back()).cost == 4);
}

TEST_CASE("goodplan: rho of one contraction eating half of TMST") {
  auto f = rho(relative_greedy(star_with_tail()));
  CHECK(f(q(0)) == q(1, 2));
  CHECK(f(q(1, 5)) == q(1, 2));
  CHECK(f(q(249, 1000)) == q(1, 2));
  CHECK(f(q(1, 4)) == 0);
  CHECK(f(q(1, 2)) == 0);
  CHECK(f.integral(q(0), q(1, 2)) == q(1, 8));
}

TEST_CASE("goodplan: greedy ratios never decrease and rho stays in [0, 1]") {
  Rng rng(13);
  int nonempty = 0;
  for (int it = 0; it < 25; ++it) {
    auto inst = random_instance(rng, {9, 4 + it % 3, 6, 9});
    auto run = relative_greedy(inst);
    if (!run.steps.empty()) ++nonempty;
    for (std::size_t i = 1; i < run.steps.size(); ++i) CHECK(run.steps[i - 1].ratio <= run.steps[i].ratio);
    auto f = rho(run);
    Rational prev = f(q(0));
    CHECK(prev <= 1);
    for (int g = 1; g <= 20; ++g) {
      Rational v = f(q(g, 20));
      CHECK(v <= prev);
      CHECK(v.sign() >= 0);
      prev = v;
    }
    // The plans along the run are the canonical plans of the contracted graphs.
    for (std::size_t i = 0; i < run.graphs.size(); ++i) {
      auto direct = canonical_plan(run.graphs[i]);
      REQUIRE(direct.size() == run.plans[i].size());
      for (std::size_t x = 0; x < direct.size(); ++x)
        for (std::size_t y = 0; y < direct.size(); ++y) {
          int a = run.plans[i].index(direct.labels()[x]), b = run.plans[i].index(direct.labels()[y]);
          CHECK(direct.time(int(x), int(y)) == run.plans[i].time(a, b));
        }
    }
  }
  CHECK(nonempty > 0);
}

TEST_CASE("goodplan: OPT/TMST <= 1 - integral of rho over [0, 1/2]") {
  Rng rng(17);
  for (int it = 0; it < 20; ++it) {
    auto inst = random_instance(rng, {9, 3 + it % 4, 6, 9});
    auto run = relative_greedy(inst);
    auto f = rho(run);
    CHECK(opt_value(inst) / run.tmst <= Rational(1) - f.integral(q(0), q(1, 2)));
  }
}

TEST_CASE("goodplan: MST-optimal endpoints 7/12 and 1/2") {
  Rng rng(19);
  for (int it = 0; it < 8; ++it) {
    auto inst = random_mst_optimal(rng, {8, 4, 4, 9});
    auto run = relative_greedy(inst);
    REQUIRE(run.steps.empty());
    CHECK(value(construct_gamma_plan(run, q(0))) == q(7, 12) * run.tmst);
    CHECK(value(construct_gamma_plan(run, q(1, 5))) == q(1, 2) * run.tmst);
  }
}

TEST_CASE("goodplan: constructed plans are gamma-good and meet the value bounds") {
  Rng rng(23);
  for (int it = 0; it < 15; ++it) {
    auto inst = random_instance(rng, {9, 3 + it % 3, 6, 9});
    auto run = relative_greedy(inst);
    Rational opt = opt_value(inst);
    for (Rational g : {q(0), q(1, 20), q(1, 10), q(3, 20), q(1, 5)}) {
      auto plan = construct_gamma_plan(run, g);
      CHECK(classify_gamma(plan, inst, g).good);
      std::size_t j = improving_prefix(run, g);
      Rational tg = run.tmst, tp = tmst(run.graphs[j]).cost;
      Rational c = (Rational(7) - Rational(5) * g) / (Rational(18) - Rational(14) * g);
      CHECK(value(plan) >= (a_of(g) - c) * tp + c * tg);
      if (g.sign() > 0)
        CHECK(value(plan) >= a_of(g) * (tg - (tg - opt) / g * (Rational(3) - Rational(7) * g) /
                                                  (Rational(9) - Rational(7) * g)));
    }
  }
}

TEST_CASE("goodplan: scaled gamma plans give feasible runs below BCR") {
  Rng rng(29);
  Rational eps(1, 100);
  for (int it = 0; it < 10; ++it) {
    auto inst = random_instance(rng, {7, 3 + it % 2, 4, 9});
    auto run = relative_greedy(inst);
    Rational bcr = bcr_value(inst);
    for (Rational g : {q(0), q(1, 10), q(1, 5)}) {
      auto plan = scale(construct_gamma_plan(run, g), Rational(1) - eps);
      auto ws = make_well_subdivided(inst, plan);
      auto res = moat::run(ws.instance, plan);
      CHECK(is_feasible_run(res.trace).feasible);
      CHECK(res.trace.online_objective() == value(plan));
      CHECK(value(plan) <= bcr);
    }
  }
}

TEST_CASE("goodplan: gap integral enclosure") {
  auto gb = gap_bound();
  CHECK(gb.integral_hi - gb.integral_lo <= q(1, 1000000));
  CHECK(gb.integral_lo >= q(505, 10000));
  CHECK(gb.integral_hi <= q(515, 10000));
  CHECK(gb.bound_hi <= q(1898, 1000));
  CHECK(gb.bound_lo >= q(1897, 1000));
  CHECK(gb.bound_lo <= gb.bound_hi);
  // Integrand vanishes at 1/5: a(1/5) = 1/2.
  CHECK(a_of(q(1, 5)) == q(1, 2));
}

TEST_CASE("goodplan: best gamma") {
  RhoFunction zero;
  auto b0 = best_gamma(zero);
  CHECK(b0.gamma == 0);
  CHECK(b0.bound == q(7, 12));
  RhoFunction one{{q(1)}, {q(1)}};
  auto b1 = best_gamma(one);
  CHECK(b1.raw < q(1, 2));
  CHECK(b1.bound == q(1, 2));
  // A dense grid never beats the reported maximum by more than rounding.
  RhoFunction mixed{{q(9, 10), q(17, 20)}, {q(3, 10), q(1, 10)}};
  auto bm = best_gamma(mixed);
  for (int i = 0; i <= 400; ++i) {
    Rational g(i, 2000);
    CHECK(a_of(g) - b_of(g) * mixed(g) <= bm.raw + q(1, 1000000));
  }
}

TEST_CASE("goodplan: best gamma bound never exceeds BCR/TMST") {
  Rng rng(31);
  for (int it = 0; it < 12; ++it) {
    auto inst = random_instance(rng, {8, 3 + it % 3, 5, 9});
    auto run = relative_greedy(inst);
    auto bg = best_gamma(rho(run));
    CHECK(bg.bound * run.tmst <= bcr_value(inst));
  }
}

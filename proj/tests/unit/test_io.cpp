#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "moat/io.hpp"
#include "moat/random.hpp"
#include "moat/svg.hpp"

using namespace moat;
using testing::make_instance;
using testing::q;

namespace {

const std::filesystem::path kGolden = MOAT_GOLDEN_DIR;
const std::filesystem::path kData = std::filesystem::path(MOAT_GOLDEN_DIR) / ".." / ".." / "data";

}  // namespace

TEST_CASE("io: instance JSON round trip") {
  Rng rng(1);
  for (int it = 0; it < 10; ++it) {
    auto inst = random_instance(rng, {7, 3, 4, 9});
    auto back = parse_instance_json(instance_to_json(inst));
    REQUIRE(back.num_vertices() == inst.num_vertices());
    REQUIRE(back.num_edges() == inst.num_edges());
    for (EdgeId e = 0; e < EdgeId(inst.num_edges()); ++e) {
      CHECK(back.name(back.edge(e).u) == inst.name(inst.edge(e).u));
      CHECK(back.edge(e).cost == inst.edge(e).cost);
    }
    CHECK(back.root() == inst.root());
    CHECK(instance_to_json(back) == instance_to_json(inst));
  }
}

TEST_CASE("io: costs as fractions, decimals and integers") {
  auto inst = parse_instance_json(R"({"vertices": [1, 2, "x"], "terminals": [1, 2],
    "edges": [{"u": 1, "v": "x", "cost": "7/6"}, {"u": "x", "v": 2, "cost": 3}, {"u": 1, "v": 2, "cost": "2.5"}]})");
  CHECK(inst.edge(0).cost == q(7, 6));
  CHECK(inst.edge(1).cost == 3);
  CHECK(inst.edge(2).cost == q(5, 2));
  CHECK_FALSE(inst.root().has_value());
  CHECK_THROWS_AS(parse_instance_json("{not json"), InvalidInput);
  CHECK_THROWS_AS(parse_instance_json(R"({"vertices": ["a"], "terminals": ["b"], "edges": []})"), InvalidInput);
  CHECK_THROWS_AS(
      parse_instance_json(R"({"vertices": ["a","b"], "terminals": ["a"], "edges": [{"u":"a","v":"b","cost":"-1"}]})"),
      InvalidInput);
}

TEST_CASE("io: SteinLib subset") {
  auto inst = load_instance(kData / "triangle.stp");
  CHECK(inst.num_vertices() == 4);
  CHECK(inst.num_terminals() == 3);
  CHECK(tmst(inst).cost == 7);
  std::istringstream bad("SECTION Graph\nE 1 x 3\nEND\n");
  CHECK_THROWS_AS(parse_stp(bad), InvalidInput);
}

TEST_CASE("io: missing files") {
  CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), FileNotFound);
}

TEST_CASE("io: plans and duals") {
  auto plan = parse_plan_json(read_file(kData / "order_sensitive_plan.json"));
  CHECK(plan.time(0, 1) == q(133, 6));
  auto again = parse_plan_json(plan_to_json(plan));
  CHECK(again.labels() == plan.labels());
  CHECK(again.time(0, 1) == plan.time(0, 1));
  CHECK(parse_plan_json(R"([["a", "b", "1"], ["b", "c", "2"], ["a", "c", "2"]])").size() == 3);
  CHECK_THROWS_AS(parse_plan_json(R"([["a", "b", "1"], ["b", "c", "2"]])"), InvalidInput);
  CHECK_THROWS_AS(parse_plan_json(R"([["a", "b", "1"], ["b", "c", "2"], ["a", "c", "3"]])"), InvalidInput);

  auto inst = load_instance(kData / "four_terminals.json");
  auto res = run(inst, canonical_plan(inst));
  auto d = parse_dual_json(dual_to_json(res.dual, inst), inst);
  CHECK(dual_objective(d, inst) == dual_objective(res.dual, inst));
  CHECK(d.entries.size() == res.dual.entries.size());
  auto trace = trace_to_json(res.trace);
  CHECK(trace.find("\"events\"") != std::string::npos);
}

TEST_CASE("svg: golden frame of the four-terminal example") {
  auto inst = load_instance(kData / "four_terminals.json");
  auto res = run(inst, canonical_plan(inst));
  auto svg = render_frame(res.trace, default_layout(inst), q(4));
  auto golden = kGolden / "four_terminals_t4.svg";
  if (!std::filesystem::exists(golden)) write_file(golden, svg);
  CHECK(svg == read_file(golden));
  CHECK(svg.rfind("<svg", 0) == 0);
  // Frames differ over time and are deterministic.
  CHECK(render_frame(res.trace, default_layout(inst), q(1)) != svg);
  CHECK(render_frame(res.trace, default_layout(inst), q(4)) == svg);
}

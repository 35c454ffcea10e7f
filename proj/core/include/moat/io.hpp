#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "moat/growth.hpp"
#include "moat/instance.hpp"
#include "moat/merge_plan.hpp"

namespace moat {

class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::filesystem::path& p) : Error("cannot open " + p.string()) {}
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view text);

// {"vertices": [...], "terminals": [...], "root": id|null,
//  "edges": [{"u", "v", "cost": "p/q"}], "layout": {id: [x, y]}}
Instance parse_instance_json(std::string_view text);
std::string instance_to_json(const Instance& inst);

// SteinLib subset: SECTION Graph (E lines) and SECTION Terminals (T lines,
// optional Root). Vertices are named by their STP number.
Instance parse_stp(std::istream& in);

// .stp by extension, JSON otherwise.
Instance load_instance(const std::filesystem::path& p);

// {"terminals": [...], "entries": [[x, y, "p/q"], ...]} or a bare entry list.
MergePlan parse_plan_json(std::string_view text);
std::string plan_to_json(const MergePlan& plan);

// {"root": id, "entries": [{"vertices": [...], "y": "p/q"}]}
DualSolution parse_dual_json(std::string_view text, const Instance& inst);
std::string dual_to_json(const DualSolution& d, const Instance& inst);

// Events, per-set atf tables and contribution intervals.
std::string trace_to_json(const GrowthTrace& trace);

}  // namespace moat

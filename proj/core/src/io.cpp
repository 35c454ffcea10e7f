#include "moat/io.hpp"

#include <fstream>
#include <map>
#include <istream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace moat {

using nlohmann::json;

namespace {

Rational cost_of(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InvalidInput("cost must be an integer or a \"p/q\" string");
}

std::string id_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw InvalidInput("vertex ids must be strings or integers");
}

json parse_or_throw(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FileNotFound(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

Instance parse_instance_json(std::string_view text) {
  json j = parse_or_throw(text);
  try {
    InstanceBuilder b;
    bool listed = j.contains("vertices");
    if (listed)
      for (const auto& v : j.at("vertices")) b.add_vertex(id_of(v));
    auto known = [&](const std::string& name) {
      if (listed && !b.has_vertex(name)) throw InvalidInput("unknown vertex '" + name + "'");
      return name;
    };
    for (const auto& e : j.at("edges")) {
      std::string u = known(id_of(e.at("u"))), v = known(id_of(e.at("v")));
      b.add_edge(u, v, cost_of(e.at("cost")));
    }
    for (const auto& t : j.at("terminals")) b.add_terminal(b.add_vertex(known(id_of(t))));
    if (j.contains("root") && !j.at("root").is_null()) {
      std::string r = id_of(j.at("root"));
      if (!b.has_vertex(r)) throw InvalidInput("unknown root '" + r + "'");
      b.set_root(b.vertex(r));
    }
    Instance inst = b.build();
    if (j.contains("layout")) {
      std::unordered_map<std::string, std::pair<double, double>> layout;
      for (auto it = j.at("layout").begin(); it != j.at("layout").end(); ++it)
        layout[it.key()] = {it.value().at(0).get<double>(), it.value().at(1).get<double>()};
      inst.set_layout(std::move(layout));
    }
    return inst;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad instance JSON: ") + e.what());
  }
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["vertices"] = json::array();
  for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v) j["vertices"].push_back(inst.name(v));
  j["terminals"] = json::array();
  for (VertexId t : inst.terminals()) j["terminals"].push_back(inst.name(t));
  j["root"] = inst.root() ? json(inst.name(*inst.root())) : json(nullptr);
  j["edges"] = json::array();
  for (const Edge& e : inst.edges())
    j["edges"].push_back({{"u", inst.name(e.u)}, {"v", inst.name(e.v)}, {"cost", e.cost.str()}});
  if (!inst.layout().empty()) {
    json l = json::object();
    std::map<std::string, std::pair<double, double>> sorted(inst.layout().begin(), inst.layout().end());
    for (const auto& [k, xy] : sorted) l[k] = {xy.first, xy.second};
    j["layout"] = l;
  }
  return j.dump(2) + "\n";
}

Instance parse_stp(std::istream& in) {
  InstanceBuilder b;
  std::string line, section;
  std::optional<std::string> root;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string upper = key;
    for (char& c : upper) c = char(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "SECTION") {
      ls >> section;
      for (char& c : section) c = char(std::toupper(static_cast<unsigned char>(c)));
      continue;
    }
    if (upper == "END") {
      section.clear();
      continue;
    }
    if (upper == "EOF") break;
    if (section == "GRAPH") {
      if (upper == "NODES") {
        long n = 0;
        ls >> n;
        for (long i = 1; i <= n; ++i) b.add_vertex(std::to_string(i));
      } else if (upper == "E" || upper == "A") {
        long u, v, c;
        if (!(ls >> u >> v >> c)) throw InvalidInput("stp line " + std::to_string(line_no) + ": bad edge");
        b.add_edge(std::to_string(u), std::to_string(v), Rational(c));
      }
    } else if (section == "TERMINALS") {
      if (upper == "T") {
        long t;
        if (!(ls >> t)) throw InvalidInput("stp line " + std::to_string(line_no) + ": bad terminal");
        b.add_terminal(b.add_vertex(std::to_string(t)));
      } else if (upper == "ROOT" || upper == "ROOTP") {
        long t;
        ls >> t;
        root = std::to_string(t);
      }
    }
  }
  if (root) b.set_root(b.vertex(*root));
  return b.build();
}

Instance load_instance(const std::filesystem::path& p) {
  std::string text = read_file(p);
  if (p.extension() == ".stp" || p.extension() == ".STP") {
    std::istringstream ss(text);
    return parse_stp(ss);
  }
  return parse_instance_json(text);
}

MergePlan parse_plan_json(std::string_view text) {
  json j = parse_or_throw(text);
  try {
    const json& entries = j.is_array() ? j : j.at("entries");
    std::vector<std::string> labels;
    std::map<std::string, int> index;
    auto intern = [&](const std::string& s) {
      auto [it, fresh] = index.emplace(s, int(labels.size()));
      if (fresh) labels.push_back(s);
      return it->second;
    };
    if (j.is_object() && j.contains("terminals"))
      for (const auto& t : j.at("terminals")) intern(id_of(t));
    std::vector<std::tuple<int, int, Rational>> triples;
    for (const auto& e : entries) {
      int x = intern(id_of(e.at(0))), y = intern(id_of(e.at(1)));
      triples.emplace_back(x, y, cost_of(e.at(2)));
    }
    Matrix m(labels.size(), std::vector<Rational>(labels.size()));
    std::set<std::pair<int, int>> seen;
    for (auto& [x, y, t] : triples) {
      if (x == y) {
        if (!t.is_zero()) throw InvalidInput("nonzero diagonal merge time");
        continue;
      }
      m[x][y] = m[y][x] = t;
      seen.insert({std::min(x, y), std::max(x, y)});
    }
    if (seen.size() != labels.size() * (labels.size() - 1) / 2)
      throw InvalidInput("merge plan must list every terminal pair");
    return MergePlan(std::move(labels), std::move(m));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad plan JSON: ") + e.what());
  }
}

std::string plan_to_json(const MergePlan& plan) {
  json j;
  j["terminals"] = plan.labels();
  j["entries"] = json::array();
  for (std::size_t i = 0; i < plan.size(); ++i)
    for (std::size_t k = i + 1; k < plan.size(); ++k)
      j["entries"].push_back({plan.labels()[i], plan.labels()[k], plan.time(int(i), int(k)).str()});
  return j.dump(2) + "\n";
}

DualSolution parse_dual_json(std::string_view text, const Instance& inst) {
  json j = parse_or_throw(text);
  try {
    DualSolution d;
    d.root = inst.id(id_of(j.at("root")));
    for (const auto& e : j.at("entries")) {
      DualEntry de;
      for (const auto& v : e.at("vertices")) de.vertices.push_back(inst.id(id_of(v)));
      std::sort(de.vertices.begin(), de.vertices.end());
      de.y = cost_of(e.at("y"));
      d.entries.push_back(std::move(de));
    }
    return d;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad dual JSON: ") + e.what());
  }
}

std::string dual_to_json(const DualSolution& d, const Instance& inst) {
  json j;
  j["root"] = d.root >= 0 ? json(inst.name(d.root)) : json(nullptr);
  j["entries"] = json::array();
  for (const auto& e : d.entries) {
    json vs = json::array();
    for (VertexId v : e.vertices) vs.push_back(inst.name(v));
    j["entries"].push_back({{"vertices", vs}, {"y", e.y.str()}});
  }
  return j.dump(2) + "\n";
}

std::string trace_to_json(const GrowthTrace& tr) {
  const Instance& inst = tr.instance();
  const Dendrogram& d = tr.sets();
  auto at = [&](int idx) { return idx == kNever ? json(nullptr) : json(tr.time(idx).str()); };
  auto set_name = [&](int s) {
    std::string out = "{";
    for (std::size_t i = 0; i < d.sets[s].members.size(); ++i)
      out += (i ? "," : "") + tr.plan().labels()[d.sets[s].members[i]];
    return out + "}";
  };
  auto arc_json = [&](ArcId a) { return json::array({inst.name(inst.tail(a)), inst.name(inst.head(a))}); };
  json j;
  j["root"] = inst.name(tr.root());
  j["end"] = tr.time(tr.end_index()).str();
  j["truncated"] = tr.truncated();
  j["objective"] = tr.online_objective().str();
  json ev = json::array();
  for (const auto& e : tr.events()) {
    json x{{"time", tr.time(e.time).str()}};
    switch (e.kind) {
      case EventKind::kEdgeTight:
        x["kind"] = "edge-tight";
        x["arc"] = arc_json(e.a);
        break;
      case EventKind::kPartitionChange:
        x["kind"] = "partition-change";
        x["set"] = set_name(e.a);
        break;
      case EventKind::kReach:
        x["kind"] = "reach";
        x["set"] = set_name(e.a);
        x["vertex"] = inst.name(e.b);
        break;
    }
    ev.push_back(std::move(x));
  }
  j["events"] = std::move(ev);
  auto atf = all_set_atf(tr);
  json sets = json::array();
  for (std::size_t s = 0; s < d.sets.size(); ++s) {
    json js{{"set", set_name(int(s))},
            {"activation", at(tr.set_start(int(s)))},
            {"deactivation", at(tr.set_end(int(s)))}};
    json a = json::object();
    for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v)
      if (atf[s][v] != kNever) a[inst.name(v)] = tr.time(atf[s][v]).str();
    js["atf"] = std::move(a);
    sets.push_back(std::move(js));
  }
  j["sets"] = std::move(sets);
  json contrib = json::array();
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a)
    for (const auto& c : contributions(tr, atf, a))
      contrib.push_back({{"arc", arc_json(a)},
                         {"set", set_name(c.set)},
                         {"from", tr.time(c.start).str()},
                         {"to", tr.time(c.end).str()}});
  j["contributions"] = std::move(contrib);
  json tight = json::array();
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a)
    if (tr.tight_index(a) != kNever) tight.push_back({{"arc", arc_json(a)}, {"time", at(tr.tight_index(a))}});
  j["tight"] = std::move(tight);
  return j.dump(2) + "\n";
}

}  // namespace moat

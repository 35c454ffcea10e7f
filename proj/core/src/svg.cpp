#include "moat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace moat {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Layout default_layout(const Instance& inst) {
  std::size_t n = inst.num_vertices();
  Layout out(n);
  bool complete = !inst.layout().empty();
  for (VertexId v = 0; v < VertexId(n) && complete; ++v) {
    auto it = inst.layout().find(inst.name(v));
    if (it == inst.layout().end()) complete = false;
    else out[v] = it->second;
  }
  if (complete) return out;
  const double pi = std::acos(-1.0);
  for (std::size_t v = 0; v < n; ++v) {
    double a = 2 * pi * double(v) / double(std::max<std::size_t>(n, 1));
    out[v] = {std::cos(a), std::sin(a)};
  }
  return out;
}

std::string render_frame(const GrowthTrace& tr, const Layout& layout, const Rational& t) {
  const Instance& inst = tr.instance();
  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  for (const auto& [x, y] : layout) {
    minx = std::min(minx, x), maxx = std::max(maxx, x);
    miny = std::min(miny, y), maxy = std::max(maxy, y);
  }
  if (layout.empty()) minx = maxx = miny = maxy = 0;
  const double width = 640, height = 480, pad = 40;
  double sx = (width - 2 * pad) / std::max(maxx - minx, 1e-9);
  double sy = (height - 2 * pad) / std::max(maxy - miny, 1e-9);
  double s = std::min(sx, sy);
  auto px = [&](VertexId v) { return pad + (layout[v].first - minx) * s; };
  auto py = [&](VertexId v) { return height - pad - (layout[v].second - miny) * s; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">t = " << escape(t.str()) << "</text>\n";
  for (const Edge& e : inst.edges())
    os << "<line x1=\"" << fmt(px(e.u)) << "\" y1=\"" << fmt(py(e.u)) << "\" x2=\"" << fmt(px(e.v)) << "\" y2=\""
       << fmt(py(e.v)) << "\" stroke=\"#cccccc\" stroke-width=\"6\"/>\n";

  auto atf = all_set_atf(tr);
  for (ArcId a = 0; a < ArcId(inst.num_arcs()); ++a) {
    VertexId u = inst.tail(a), w = inst.head(a);
    double dx = px(w) - px(u), dy = py(w) - py(u);
    auto cs = contributions(tr, atf, a);
    std::sort(cs.begin(), cs.end(), [](const Contribution& x, const Contribution& y) {
      return std::tie(x.start, x.set) < std::tie(y.start, y.set);
    });
    Rational filled;
    for (const auto& c : cs) {
      const Rational& from = tr.time(c.start);
      if (!(from < t)) continue;
      Rational to = std::min(tr.time(c.end), t);
      Rational amount = to - from;
      double f0 = (filled / inst.cost(a)).to_double();
      filled += amount;
      double f1 = (filled / inst.cost(a)).to_double();
      const char* color = kPalette[c.set % (sizeof kPalette / sizeof *kPalette)];
      os << "<line x1=\"" << fmt(px(u) + dx * f0) << "\" y1=\"" << fmt(py(u) + dy * f0) << "\" x2=\""
         << fmt(px(u) + dx * f1) << "\" y2=\"" << fmt(py(u) + dy * f1) << "\" stroke=\"" << color
         << "\" stroke-width=\"6\"/>\n";
    }
  }
  for (const Edge& e : inst.edges()) {
    double mx = (px(e.u) + px(e.v)) / 2, my = (py(e.u) + py(e.v)) / 2;
    os << "<text x=\"" << fmt(mx + 4) << "\" y=\"" << fmt(my - 4)
       << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555555\">" << escape(e.cost.str()) << "</text>\n";
  }
  for (VertexId v = 0; v < VertexId(inst.num_vertices()); ++v) {
    if (inst.is_terminal(v))
      os << "<rect x=\"" << fmt(px(v) - 6) << "\" y=\"" << fmt(py(v) - 6)
         << "\" width=\"12\" height=\"12\" fill=\"black\"/>\n";
    else
      os << "<circle cx=\"" << fmt(px(v)) << "\" cy=\"" << fmt(py(v)) << "\" r=\"4\" fill=\"#333333\"/>\n";
    os << "<text x=\"" << fmt(px(v) + 8) << "\" y=\"" << fmt(py(v) + 14)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(inst.name(v)) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace moat

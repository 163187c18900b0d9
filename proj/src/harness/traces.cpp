#include "adversim/harness/traces.hpp"

#include "adversim/geometry.hpp"
#include "adversim/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace adversim {

namespace {

const char* const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::optional<Vec2> impact_position(const RolloutResult& result) {
  const Verdict& v = result.verdict;
  if (v.kind == VerdictKind::kNoCollision || !v.time_index || !v.agents_involved) return std::nullopt;
  const TrafficState& s = result.states.at(*v.time_index);
  const AgentState& a = s.at(v.agents_involved->first);
  const AgentState& b = s.at(v.agents_involved->second);
  if (v.kind == VerdictKind::kOffRoad) return a.position;
  const Polyline region = overlap_region(box_of(a), box_of(b));
  if (region.empty()) return Vec2(0.5 * (a.position + b.position));
  Vec2 c = Vec2::Zero();
  for (const auto& p : region) c += p;
  return Vec2(c / static_cast<double>(region.size()));
}

std::string trace_csv(const RolloutResult& result) {
  std::ostringstream out;
  out << "t,agent,x,y,heading,speed\n";
  char buf[160];
  for (std::size_t t = 0; t < result.states.size(); ++t) {
    for (std::size_t i = 0; i < result.states[t].size(); ++i) {
      const AgentState& a = result.states[t][i];
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.9g,%.9g,%.9g,%.9g\n", t, i, a.position.x(), a.position.y(), a.heading,
                    a.speed);
      out << buf;
    }
  }
  return out.str();
}

std::string trace_svg(const RolloutResult& result, const MapModel& map) {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  auto grow = [&](const Vec2& p) {
    lo_x = std::min(lo_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_x = std::max(hi_x, p.x());
    hi_y = std::max(hi_y, p.y());
  };
  for (const auto& poly : map.drivable()) {
    for (const auto& p : poly) grow(p);
  }
  for (const auto& s : result.states) {
    for (const auto& a : s) grow(a.position);
  }
  if (!std::isfinite(lo_x)) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
  const double pad = 5.0;
  lo_x -= pad, lo_y -= pad, hi_x += pad, hi_y += pad;
  // y grows upward in world coordinates.
  auto sx = [&](double x) { return num(x - lo_x); };
  auto sy = [&](double y) { return num(hi_y - y); };
  auto points = [&](const Polyline& line) {
    std::string s;
    for (const auto& p : line) s += sx(p.x()) + "," + sy(p.y()) + " ";
    return s;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(4 * (hi_x - lo_x)) << "\" height=\""
      << num(4 * (hi_y - lo_y)) << "\" viewBox=\"0 0 " << num(hi_x - lo_x) << ' ' << num(hi_y - lo_y) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out << "<g id=\"map\" fill=\"#d9d9d9\" stroke=\"#7f7f7f\" stroke-width=\"0.15\">\n";
  for (const auto& poly : map.drivable()) out << "<polygon points=\"" << points(poly) << "\"/>\n";
  out << "</g>\n";

  const std::size_t agents = result.states.empty() ? 0 : result.states.front().size();
  for (std::size_t i = 0; i < agents; ++i) {
    Polyline path;
    for (const auto& s : result.states) path.push_back(s[i].position);
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<g id=\"agent" << i << "\" stroke=\"" << color << "\">\n";
    out << "<polyline fill=\"none\" stroke-width=\"0.3\" points=\"" << points(path) << "\"/>\n";
    const auto corners = box_of(result.states.back()[i]).corners();
    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.4\" stroke-width=\"0.15\" points=\""
        << points(Polyline(corners.begin(), corners.end())) << "\"/>\n";
    out << "</g>\n";
  }
  if (const auto p = impact_position(result)) {
    out << "<circle id=\"impact\" cx=\"" << sx(p->x()) << "\" cy=\"" << sy(p->y())
        << "\" r=\"1.2\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.4\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_traces(const RolloutResult& result, const MapModel& map, const std::filesystem::path& stem) {
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path svg = stem;
  svg += ".svg";
  write_file(csv, trace_csv(result));
  write_file(svg, trace_svg(result, map));
}

}  // namespace adversim

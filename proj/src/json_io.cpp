#include "luf/json_io.hpp"

#include <algorithm>

namespace luf {

namespace {

json coord_json(Coord c) { return {{"sheet", c.sheet}, {"row", c.row}, {"col", c.col}}; }

}  // namespace

json graph_to_json(const CodeGraph& g) {
  json nodes = json::array();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    json n = {{"id", v},
              {"kind", g.is_boundary(v) ? "boundary" : "bulk"},
              {"coords", coord_json(g.coord(v))},
              {"span", g.span(v)}};
    if (g.is_boundary(v)) n["side"] = to_string(g.boundary_side(v));
    const NodeId up = g.signalee(v);
    n["signalee"] = up == kController ? json("controller") : json(up);
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    edges.push_back({{"id", e},
                     {"u", ed.lo},
                     {"v", ed.hi},
                     {"kind", ed.kind == EdgeKind::Horizontal ? "horizontal" : "vertical"}});
  }
  return {{"d", g.distance()},
          {"tau", g.tau()},
          {"controller_span", g.controller_span()},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

json error_to_json(const ErrorPattern& e) { return {{"edges", e.edges}}; }

ErrorPattern error_from_json(const json& j) {
  return make_error(j.at("edges").get<std::vector<EdgeId>>());
}

json syndrome_to_json(const Syndrome& s) { return {{"defects", s.defects}}; }

Syndrome syndrome_from_json(const json& j) {
  return make_syndrome(j.at("defects").get<std::vector<NodeId>>());
}

json trace_to_json(const TraceRecord& rec) {
  json j = {{"t", rec.t},
            {"stage", to_string(rec.stage)},
            {"busy_count", rec.busy_count},
            {"active_count", rec.active_count},
            {"anyon_count", rec.anyon_count},
            {"support_changes", rec.support_changes}};
  if (rec.controller_countdown >= 0) {
    j["controller_countdown"] = rec.controller_countdown;
    j["busy_signal_arrival"] = rec.busy_signal_arrival;
    j["stage_front_position"] = rec.stage_front_position;
  }
  return j;
}

json violation_to_json(const ViolationReport& report) {
  return {{"sample_seed", report.sample_seed}, {"kind", report.kind}, {"detail", report.detail}};
}

ViolationReport violation_from_json(const json& j) {
  return {j.at("sample_seed").get<std::uint64_t>(), j.at("kind").get<std::string>(),
          j.at("detail").get<std::string>()};
}

}  // namespace luf

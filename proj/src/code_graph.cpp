#include "luf/code_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace luf {

namespace {

constexpr Direction kNeighbourDirs[] = {Direction::N, Direction::W, Direction::E,
                                        Direction::S, Direction::D, Direction::U};

Coord step(Coord c, Direction dir) {
  switch (dir) {
    case Direction::N: --c.row; break;
    case Direction::S: ++c.row; break;
    case Direction::W: --c.col; break;
    case Direction::E: ++c.col; break;
    case Direction::D: --c.sheet; break;
    case Direction::U: ++c.sheet; break;
    case Direction::C: break;
  }
  return c;
}

}  // namespace

std::string_view to_string(Direction dir) {
  switch (dir) {
    case Direction::C: return "C";
    case Direction::N: return "N";
    case Direction::W: return "W";
    case Direction::E: return "E";
    case Direction::S: return "S";
    case Direction::D: return "D";
    case Direction::U: return "U";
  }
  return "?";
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::None: return "None";
    case Side::West: return "West";
    case Side::East: return "East";
  }
  return "?";
}

CodeGraph CodeGraph::build(int d, bool faulty) {
  if (d < 3 || d % 2 == 0) {
    throw std::invalid_argument("code distance must be odd and >= 3, got " + std::to_string(d));
  }
  CodeGraph g;
  g.d_ = d;
  g.tau_ = faulty ? d : 0;
  g.sheets_ = faulty ? d : 1;
  const int cols = d + 1;
  const std::size_t total = static_cast<std::size_t>(g.sheets_) * d * cols;
  g.num_boundary_ = static_cast<std::size_t>(g.sheets_) * d * 2;

  g.coords_.reserve(total);
  for (int s = 0; s < g.sheets_; ++s) {
    for (int r = 0; r < d; ++r) {
      g.coords_.push_back({s, r, d});
      g.coords_.push_back({s, r, 0});
    }
  }
  for (int s = 0; s < g.sheets_; ++s) {
    for (int r = 0; r < d; ++r) {
      for (int c = 1; c < d; ++c) g.coords_.push_back({s, r, c});
    }
  }
  g.grid_.assign(total, 0);
  for (NodeId v = 0; v < total; ++v) {
    const Coord c = g.coords_[v];
    g.grid_[(static_cast<std::size_t>(c.sheet) * d + c.row) * cols + c.col] = v;
  }

  const auto bulk_col = [d](int col) { return col >= 1 && col <= d - 1; };
  const auto linked = [&](Coord a, Direction dir) {
    switch (dir) {
      case Direction::W:
      case Direction::E: return true;
      case Direction::N:
      case Direction::S:
      case Direction::D:
      case Direction::U: return bulk_col(a.col);
      case Direction::C: return false;
    }
    return false;
  };

  // Edges in (lo, direction) order; each edge is created from its lower endpoint.
  std::vector<std::vector<Incidence>> adj(total);
  for (NodeId v = 0; v < total; ++v) {
    const Coord cv = g.coords_[v];
    for (Direction dir : kNeighbourDirs) {
      const Coord cu = step(cv, dir);
      if (!g.contains(cu) || !linked(cv, dir)) continue;
      const NodeId u = g.node_at(cu);
      if (u < v) continue;
      const auto e = static_cast<EdgeId>(g.edges_.size());
      const EdgeKind kind =
          (dir == Direction::D || dir == Direction::U) ? EdgeKind::Vertical : EdgeKind::Horizontal;
      g.edges_.push_back({v, u, kind});
      adj[v].push_back({e, u, dir});
    }
  }
  // Add reverse incidences with the opposite direction.
  for (EdgeId e = 0; e < g.edges_.size(); ++e) {
    const Edge& ed = g.edges_[e];
    const Coord a = g.coords_[ed.lo];
    const Coord b = g.coords_[ed.hi];
    Direction back = Direction::C;
    if (b.row > a.row) back = Direction::N;
    else if (b.row < a.row) back = Direction::S;
    else if (b.col > a.col) back = Direction::W;
    else if (b.col < a.col) back = Direction::E;
    else if (b.sheet > a.sheet) back = Direction::D;
    else back = Direction::U;
    adj[ed.hi].push_back({e, ed.lo, back});
  }
  g.offsets_.assign(total + 1, 0);
  for (NodeId v = 0; v < total; ++v) {
    std::sort(adj[v].begin(), adj[v].end(),
              [](const Incidence& x, const Incidence& y) { return x.neighbour < y.neighbour; });
    g.offsets_[v + 1] = g.offsets_[v] + static_cast<std::uint32_t>(adj[v].size());
    g.incidence_.insert(g.incidence_.end(), adj[v].begin(), adj[v].end());
  }

  // Signalee tree: below → east → north, rooted at node 0.
  g.signalee_.assign(total, kController);
  int max_dist = 0;
  std::vector<int> dist(total, 0);
  for (NodeId v = 0; v < total; ++v) {
    const Coord c = g.coords_[v];
    if (c.sheet > 0) {
      g.signalee_[v] = g.node_at({c.sheet - 1, c.row, c.col});
    } else if (c.col < d) {
      g.signalee_[v] = g.node_at({0, c.row, c.col + 1});
    } else if (c.row > 0) {
      g.signalee_[v] = g.node_at({0, c.row - 1, c.col});
    }
    dist[v] = c.sheet + (d - c.col) + c.row;
    max_dist = std::max(max_dist, dist[v]);
  }
  g.controller_span_ = max_dist + 1;
  g.span_.resize(total);
  for (NodeId v = 0; v < total; ++v) g.span_[v] = max_dist - dist[v];

  g.signaler_offsets_.assign(total + 1, 0);
  for (NodeId v = 0; v < total; ++v) {
    if (g.signalee_[v] != kController) ++g.signaler_offsets_[g.signalee_[v] + 1];
  }
  for (std::size_t i = 0; i < total; ++i) g.signaler_offsets_[i + 1] += g.signaler_offsets_[i];
  g.signalers_.resize(g.signaler_offsets_[total]);
  std::vector<std::uint32_t> fill(g.signaler_offsets_.begin(), g.signaler_offsets_.end() - 1);
  for (NodeId v = 0; v < total; ++v) {
    if (g.signalee_[v] != kController) g.signalers_[fill[g.signalee_[v]]++] = v;
  }
  return g;
}

Side CodeGraph::boundary_side(NodeId v) const {
  if (!is_boundary(v)) return Side::None;
  return coords_[v].col == 0 ? Side::West : Side::East;
}

bool CodeGraph::contains(Coord c) const {
  return c.sheet >= 0 && c.sheet < sheets_ && c.row >= 0 && c.row < d_ && c.col >= 0 &&
         c.col <= d_;
}

NodeId CodeGraph::node_at(Coord c) const {
  if (!contains(c)) throw std::out_of_range("coordinate outside the graph");
  return grid_[(static_cast<std::size_t>(c.sheet) * d_ + c.row) * (d_ + 1) + c.col];
}

std::optional<EdgeId> CodeGraph::find_edge(NodeId u, NodeId v) const {
  for (const Incidence& inc : incident(u)) {
    if (inc.neighbour == v) return inc.edge;
  }
  return std::nullopt;
}

std::vector<EdgeId> CodeGraph::owned_edges(NodeId v) const {
  std::vector<EdgeId> out;
  for (const Incidence& inc : incident(v)) {
    if (v < inc.neighbour) out.push_back(inc.edge);
  }
  return out;
}

}  // namespace luf

#pragma once
// Hand-built graphs and engine states shared by the unit tests and the acceptance suite.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "luf/code_graph.hpp"
#include "luf/disjoint_set.hpp"
#include "luf/engine.hpp"
#include "luf/noise_model.hpp"
#include "luf/sluf_engine.hpp"

namespace scenarios {

using namespace luf;

inline NodeId at(const CodeGraph& g, int row, int col, int sheet = 0) {
  return g.node_at(Coord{sheet, row, col});
}

inline EdgeId edge_between(const CodeGraph& g, NodeId u, NodeId v) { return *g.find_edge(u, v); }

/// Edges of a path given as consecutive nodes.
inline std::vector<EdgeId> path_edges(const CodeGraph& g, const std::vector<NodeId>& nodes) {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) out.push_back(edge_between(g, nodes[i], nodes[i + 1]));
  return out;
}

/// Three defects: a bulk node x, its east and its south neighbour (2D, d >= 5).
struct Corner {
  NodeId x, east, south;
  Syndrome syndrome;
};

inline Corner corner(const CodeGraph& g, int row = 1, int col = 2) {
  Corner c{at(g, row, col), at(g, row, col + 1), at(g, row + 1, col), {}};
  c.syndrome = make_syndrome({c.x, c.east, c.south});
  return c;
}

/// Two defects next to the West boundary plus an interior pair (2D, d = 5).
inline Syndrome west_and_pair(const CodeGraph& g) {
  return make_syndrome({at(g, 0, 1), at(g, 2, 2), at(g, 2, 3), at(g, 4, 2)});
}

/// Boustrophedon walk through the bulk of a 2D graph: L edges, L + 1 nodes.
inline std::vector<NodeId> snake_nodes(const CodeGraph& g, int length) {
  const int d = g.distance();
  std::vector<NodeId> nodes;
  for (int row = 0; row < d && static_cast<int>(nodes.size()) <= length; ++row) {
    for (int i = 1; i < d && static_cast<int>(nodes.size()) <= length; ++i) {
      nodes.push_back(at(g, row, row % 2 == 0 ? i : d - i));
    }
  }
  return nodes;
}

/// Zigzag east, south, east, ... from the north-west bulk corner. IDs increase along the
/// walk, so there are no intermediate CID minima. Needs d >= length / 2 + 3.
inline std::vector<NodeId> staircase_nodes(const CodeGraph& g, int length) {
  std::vector<NodeId> nodes{at(g, 0, 1)};
  int row = 0;
  int col = 1;
  for (int i = 0; i < length; ++i) {
    (i % 2 == 0 ? col : row) += 1;
    nodes.push_back(at(g, row, col));
  }
  return nodes;
}

/// Path with fully grown supports and a defect at each end, placed at the start of Merging.
inline EngineState grown_path_state(const CodeGraph& g, const std::vector<NodeId>& nodes) {
  EngineState st = init_state(g, make_syndrome({nodes.front(), nodes.back()}));
  for (EdgeId e : path_edges(g, nodes)) st.snap.support[e] = 2;
  st.stage = Stage::Merging;
  return st;
}

inline EngineState snake_state(const CodeGraph& g, int length) {
  return grown_path_state(g, snake_nodes(g, length));
}

/// Column chain at bulk column `col`: rows 1..len already merged (cid = row 1, pointers north),
/// plus row 0 attached by a full edge. Starting Merging floods row 0's lower CID southwards.
inline EngineState receding_chain_state(const CodeGraph& g, int len, int col = 1) {
  EngineState st = init_state(g, {});
  const NodeId top = at(g, 1, col);
  for (int row = 1; row <= len; ++row) {
    const NodeId v = at(g, row, col);
    st.snap.nodes[v].cid = top;
    st.snap.nodes[v].pointer = row == 1 ? Direction::C : Direction::N;
    st.snap.support[edge_between(g, at(g, row - 1, col), v)] = 2;
  }
  st.stage = Stage::Merging;
  return st;
}

/// Connected components of the fully grown edges, labelled by lowest node ID.
inline std::vector<NodeId> grown_components(const CodeGraph& g, const Snapshot& snap) {
  DisjointSet dsu(g.num_nodes());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (snap.fully_grown(e)) dsu.unite(g.edge(e).lo, g.edge(e).hi);
  }
  std::vector<NodeId> lowest(g.num_nodes(), kController);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    NodeId& l = lowest[dsu.find(v)];
    l = std::min(l, v);
  }
  std::vector<NodeId> label(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) label[v] = lowest[dsu.find(v)];
  return label;
}

/// Neighbour a pointer leads to, or v itself for C.
inline NodeId follow(const CodeGraph& g, NodeId v, Direction dir) {
  if (dir == Direction::C) return v;
  for (const Incidence& inc : g.incident(v)) {
    if (inc.dir == dir) return inc.neighbour;
  }
  return kController;
}

}  // namespace scenarios

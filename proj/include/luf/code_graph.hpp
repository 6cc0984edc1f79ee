#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace luf {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Sentinel signalee of node 0.
inline constexpr NodeId kController = std::numeric_limits<NodeId>::max();

enum class NodeKind : std::uint8_t { Bulk, Boundary };
enum class Side : std::uint8_t { None, West, East };

/// Horizontal edges lie within a sheet (space-like); vertical edges join sheets (time-like).
enum class EdgeKind : std::uint8_t { Horizontal, Vertical };

/// Pointer directions. C is "centre" (a cluster root), D/U go down/up a sheet.
enum class Direction : std::uint8_t { C, N, W, E, S, D, U };

std::string_view to_string(Direction dir);
std::string_view to_string(Side side);

/// Sheet 0 is the bottom difference sheet; row 0 is the northmost row; column 0 is West.
struct Coord {
  int sheet = 0;
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

struct Edge {
  NodeId lo;  // lower ID endpoint, which owns the edge
  NodeId hi;
  EdgeKind kind;
};

struct Incidence {
  EdgeId edge;
  NodeId neighbour;
  Direction dir;  // direction from the node toward `neighbour`
};

/// Decoding graph of a distance-d surface code: d rows × (d+1) columns per sheet,
/// one sheet for perfect measurements or tau = d stacked sheets for faulty ones.
///
/// IDs: all boundary nodes come first (sheet bottom-up, row north→south, East then
/// West), then bulk nodes (sheet, row, col). Node 0 is the East boundary node at the
/// north end of the bottom sheet and terminates the signalee tree.
class CodeGraph {
 public:
  /// Throws std::invalid_argument for even d or d < 3.
  static CodeGraph build(int d, bool faulty);

  int distance() const { return d_; }
  /// Measurement rounds minus one: 0 for the 2D graph, d for the 3D graph.
  int tau() const { return tau_; }
  int sheets() const { return sheets_; }
  bool faulty() const { return tau_ > 0; }

  std::size_t num_nodes() const { return coords_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_boundary() const { return num_boundary_; }

  NodeKind kind(NodeId v) const {
    return v < num_boundary_ ? NodeKind::Boundary : NodeKind::Bulk;
  }
  bool is_boundary(NodeId v) const { return v < num_boundary_; }
  Side boundary_side(NodeId v) const;
  Coord coord(NodeId v) const { return coords_[v]; }
  bool contains(Coord c) const;
  /// Throws std::out_of_range if `c` is not a node.
  NodeId node_at(Coord c) const;

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> incident(NodeId v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  NodeId other_end(EdgeId e, NodeId v) const {
    return edges_[e].lo == v ? edges_[e].hi : edges_[e].lo;
  }

  /// Edges whose lower-ID endpoint is v.
  std::vector<EdgeId> owned_edges(NodeId v) const;

  /// Neighbour toward the controller: below, else east, else north. kController for node 0.
  NodeId signalee(NodeId v) const { return signalee_[v]; }
  /// Nodes whose signalee is v.
  std::span<const NodeId> signalers(NodeId v) const {
    return {signalers_.data() + signaler_offsets_[v],
            signalers_.data() + signaler_offsets_[v + 1]};
  }
  /// Signalee hops from v to node 0.
  int signal_distance(NodeId v) const { return controller_span_ - 1 - span_[v]; }
  int span(NodeId v) const { return span_[v]; }
  /// Links from the controller to the furthest node (the highest-ID boundary node).
  int controller_span() const { return controller_span_; }
  NodeId furthest_node() const { return static_cast<NodeId>(num_boundary_ - 1); }

 private:
  CodeGraph() = default;

  int d_ = 0;
  int tau_ = 0;
  int sheets_ = 0;
  std::size_t num_boundary_ = 0;
  std::vector<Coord> coords_;
  std::vector<NodeId> grid_;  // (sheet, row, col) → id
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Incidence> incidence_;
  std::vector<NodeId> signalee_;
  std::vector<std::uint32_t> signaler_offsets_;
  std::vector<NodeId> signalers_;
  std::vector<int> span_;
  int controller_span_ = 0;
};

}  // namespace luf

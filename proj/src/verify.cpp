#include "luf/verify.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

#include "luf/disjoint_set.hpp"

namespace luf {

bool check_correction(const CodeGraph& g, const Syndrome& s,
                      const std::vector<EdgeId>& correction) {
  std::vector<EdgeId> c = correction;
  std::sort(c.begin(), c.end());
  return syndrome_of(g, c) == s;
}

std::string_view to_string(LeftoverKind kind) {
  switch (kind) {
    case LeftoverKind::Cycle: return "cycle";
    case LeftoverKind::SameBoundaryPath: return "same_boundary_path";
    case LeftoverKind::OppositeBoundaryPath: return "opposite_boundary_path";
  }
  return "?";
}

int LeftoverDecomposition::count(LeftoverKind kind) const {
  return static_cast<int>(std::count_if(components.begin(), components.end(),
                                        [kind](const auto& c) { return c.kind == kind; }));
}

LeftoverDecomposition decompose_leftover(const CodeGraph& g, const ErrorPattern& e,
                                         const std::vector<EdgeId>& correction) {
  std::vector<EdgeId> c = correction;
  std::sort(c.begin(), c.end());
  const std::vector<EdgeId> leftover = symmetric_difference(e.edges, c);

  LeftoverDecomposition dec;
  std::map<NodeId, std::vector<EdgeId>> adj;
  for (EdgeId id : leftover) {
    adj[g.edge(id).lo].push_back(id);
    adj[g.edge(id).hi].push_back(id);
  }
  for (const auto& [v, edges] : adj) {
    if (!g.is_boundary(v) && edges.size() % 2 != 0) {
      dec.violations.push_back("bulk node " + std::to_string(v) + " has odd leftover degree " +
                               std::to_string(edges.size()));
    }
  }

  std::map<EdgeId, bool> used;
  for (EdgeId id : leftover) used[id] = false;
  const auto next_unused = [&](NodeId v) -> std::optional<EdgeId> {
    for (EdgeId id : adj[v]) {
      if (!used[id]) return id;
    }
    return std::nullopt;
  };

  // Trails from each boundary endpoint; bulk nodes of even degree can always be left again.
  for (const auto& [start, edges] : adj) {
    if (!g.is_boundary(start)) continue;
    const auto first = next_unused(start);
    if (!first) continue;
    LeftoverComponent trail;
    NodeId at = start;
    std::optional<EdgeId> step = first;
    while (step) {
      used[*step] = true;
      trail.edges.push_back(*step);
      at = g.other_end(*step, at);
      if (g.is_boundary(at)) break;
      step = next_unused(at);
    }
    if (!g.is_boundary(at) || at == start) {
      dec.violations.push_back("leftover trail from boundary node " + std::to_string(start) +
                               " ends at node " + std::to_string(at));
    }
    trail.kind = g.boundary_side(start) == g.boundary_side(at) ? LeftoverKind::SameBoundaryPath
                                                               : LeftoverKind::OppositeBoundaryPath;
    std::sort(trail.edges.begin(), trail.edges.end());
    dec.components.push_back(std::move(trail));
  }

  // What remains has even degree everywhere: group it into connected cycle sets.
  std::vector<EdgeId> rest;
  for (const auto& [id, u] : used) {
    if (!u) rest.push_back(id);
  }
  if (!rest.empty()) {
    std::map<NodeId, std::uint32_t> local;
    for (EdgeId id : rest) {
      local.emplace(g.edge(id).lo, static_cast<std::uint32_t>(local.size()));
      local.emplace(g.edge(id).hi, static_cast<std::uint32_t>(local.size()));
    }
    DisjointSet dsu(local.size());
    for (EdgeId id : rest) dsu.unite(local[g.edge(id).lo], local[g.edge(id).hi]);
    std::map<std::uint32_t, LeftoverComponent> groups;
    for (EdgeId id : rest) groups[dsu.find(local[g.edge(id).lo])].edges.push_back(id);
    for (auto& [root, comp] : groups) dec.components.push_back(std::move(comp));
  }
  return dec;
}

bool is_logical_error(const LeftoverDecomposition& dec) {
  return dec.count(LeftoverKind::OppositeBoundaryPath) % 2 == 1;
}

namespace {

std::vector<ClusterView> collect_clusters(const CodeGraph& g, DisjointSet& dsu,
                                          const std::vector<std::uint8_t>& support,
                                          const std::vector<std::uint8_t>& is_defect) {
  std::map<std::uint32_t, ClusterView> by_rep;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    ClusterView& c = by_rep[dsu.find(v)];
    if (c.nodes.empty()) c.root = v;  // ascending scan: first node is the lowest ID
    c.nodes.push_back(v);
    c.defect_count += is_defect[v];
    c.touches_boundary = c.touches_boundary || g.is_boundary(v);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (support[e] == 2) by_rep[dsu.find(g.edge(e).lo)].edges.push_back(e);
  }
  std::vector<ClusterView> out;
  out.reserve(by_rep.size());
  for (auto& [rep, c] : by_rep) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(),
            [](const ClusterView& a, const ClusterView& b) { return a.root < b.root; });
  return out;
}

}  // namespace

SequentialUfRun run_sequential_uf(const CodeGraph& g, const Syndrome& s, bool record_history) {
  const std::size_t n = g.num_nodes();
  DisjointSet dsu(n);
  std::vector<std::uint8_t> is_defect(n, 0);
  for (NodeId v : s.defects) is_defect[v] = 1;
  // Per-representative bookkeeping.
  std::vector<int> defects(is_defect.begin(), is_defect.end());
  std::vector<std::uint8_t> boundary(n, 0);
  for (NodeId v = 0; v < n; ++v) boundary[v] = g.is_boundary(v);
  std::vector<std::uint8_t> support(g.num_edges(), 0);

  SequentialUfRun run;
  if (record_history) run.history.push_back(collect_clusters(g, dsu, support, is_defect));

  const auto rep_active = [&](std::uint32_t r) { return defects[r] % 2 == 1 && !boundary[r]; };
  std::vector<std::uint8_t> node_active(n, 0);
  std::vector<EdgeId> newly_full;
  for (;;) {
    bool any = false;
    for (NodeId v = 0; v < n; ++v) {
      node_active[v] = rep_active(dsu.find(v));
      any = any || node_active[v];
    }
    if (!any) break;
    ++run.growth_rounds;

    newly_full.clear();
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (support[e] == 2) continue;
      const int grow = node_active[g.edge(e).lo] + node_active[g.edge(e).hi];
      if (grow == 0) continue;
      support[e] = static_cast<std::uint8_t>(std::min(2, support[e] + grow));
      if (support[e] == 2) newly_full.push_back(e);
    }
    for (EdgeId e : newly_full) {
      const std::uint32_t a = dsu.find(g.edge(e).lo);
      const std::uint32_t b = dsu.find(g.edge(e).hi);
      if (a == b) continue;
      const std::uint32_t r = dsu.unite(a, b);
      const std::uint32_t other = r == a ? b : a;
      defects[r] += defects[other];
      boundary[r] = boundary[r] || boundary[other];
    }
    if (record_history) run.history.push_back(collect_clusters(g, dsu, support, is_defect));
  }
  run.clusters = collect_clusters(g, dsu, support, is_defect);
  return run;
}

std::vector<ClusterView> sequential_uf_partition(const CodeGraph& g, const Syndrome& s) {
  return run_sequential_uf(g, s).clusters;
}

std::vector<NodeId> partition_labels(const CodeGraph& g, const std::vector<ClusterView>& clusters) {
  std::vector<NodeId> labels(g.num_nodes(), kController);
  for (const ClusterView& c : clusters) {
    for (NodeId v : c.nodes) labels[v] = c.root;
  }
  return labels;
}

namespace {

/// Local indices of the cluster's bulk nodes; boundary nodes never carry a syndrome bit.
struct BulkIndex {
  std::vector<NodeId> bulk;
  int of(NodeId v) const {
    const auto it = std::lower_bound(bulk.begin(), bulk.end(), v);
    return (it != bulk.end() && *it == v) ? static_cast<int>(it - bulk.begin()) : -1;
  }
};

BulkIndex index_bulk(const CodeGraph& g, const ClusterView& c) {
  BulkIndex idx;
  for (NodeId v : c.nodes) {
    if (!g.is_boundary(v)) idx.bulk.push_back(v);
  }
  std::sort(idx.bulk.begin(), idx.bulk.end());
  return idx;
}

std::vector<std::uint8_t> target_bits(const BulkIndex& idx, const Syndrome& s) {
  std::vector<std::uint8_t> target(idx.bulk.size(), 0);
  for (NodeId v : s.defects) {
    const int i = idx.of(v);
    if (i >= 0) target[static_cast<std::size_t>(i)] = 1;
  }
  return target;
}

bool enumerate_activity(const CodeGraph& g, const ClusterView& c, const Syndrome& s) {
  const BulkIndex idx = index_bulk(g, c);
  const std::vector<std::uint8_t> target = target_bits(idx, s);
  std::vector<std::uint8_t> parity(target.size(), 0);
  int mismatches = static_cast<int>(std::count(target.begin(), target.end(), 1));
  if (mismatches == 0) return false;
  std::vector<std::pair<int, int>> ends;
  for (EdgeId e : c.edges) ends.emplace_back(idx.of(g.edge(e).lo), idx.of(g.edge(e).hi));
  const auto toggle = [&](int i) {
    if (i < 0) return;
    const auto k = static_cast<std::size_t>(i);
    parity[k] ^= 1;
    mismatches += parity[k] != target[k] ? 1 : -1;
  };
  // Gray-code walk: subset k differs from subset k-1 in edge ctz(k).
  const std::uint64_t total = std::uint64_t{1} << ends.size();
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto& [a, b] = ends[static_cast<std::size_t>(std::countr_zero(k))];
    toggle(a);
    toggle(b);
    if (mismatches == 0) return false;
  }
  return true;
}

bool gf2_activity(const CodeGraph& g, const ClusterView& c, const Syndrome& s) {
  const BulkIndex idx = index_bulk(g, c);
  const std::vector<std::uint8_t> target = target_bits(idx, s);
  const std::size_t cols = c.edges.size();
  const std::size_t words = cols / 64 + 1;  // one spare bit column for the right-hand side
  std::vector<std::vector<std::uint64_t>> rows(idx.bulk.size(),
                                               std::vector<std::uint64_t>(words, 0));
  const auto set = [&](std::vector<std::uint64_t>& row, std::size_t bit) {
    row[bit / 64] ^= std::uint64_t{1} << (bit % 64);
  };
  for (std::size_t j = 0; j < cols; ++j) {
    for (NodeId v : {g.edge(c.edges[j]).lo, g.edge(c.edges[j]).hi}) {
      const int i = idx.of(v);
      if (i >= 0) set(rows[static_cast<std::size_t>(i)], j);
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (target[i]) set(rows[i], cols);
  }
  const auto test = [](const std::vector<std::uint64_t>& row, std::size_t bit) {
    return (row[bit / 64] >> (bit % 64)) & 1U;
  };
  std::size_t pivot_row = 0;
  for (std::size_t j = 0; j < cols && pivot_row < rows.size(); ++j) {
    std::size_t r = pivot_row;
    while (r < rows.size() && !test(rows[r], j)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[r], rows[pivot_row]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != pivot_row && test(rows[i], j)) {
        for (std::size_t w = 0; w < words; ++w) rows[i][w] ^= rows[pivot_row][w];
      }
    }
    ++pivot_row;
  }
  // Inconsistent iff some zero row has a nonzero right-hand side.
  for (std::size_t i = pivot_row; i < rows.size(); ++i) {
    if (test(rows[i], cols)) return true;
  }
  return false;
}

}  // namespace

bool brute_force_activity(const CodeGraph& g, const ClusterView& cluster, const Syndrome& s,
                          ActivityMethod method, int enumeration_cap) {
  const bool small = static_cast<int>(cluster.edges.size()) <= enumeration_cap;
  switch (method) {
    case ActivityMethod::Enumerate:
      if (!small) {
        throw std::invalid_argument("cluster has " + std::to_string(cluster.edges.size()) +
                                    " edges, above the enumeration cap");
      }
      return enumerate_activity(g, cluster, s);
    case ActivityMethod::Gf2: return gf2_activity(g, cluster, s);
    case ActivityMethod::Auto:
      return small ? enumerate_activity(g, cluster, s) : gf2_activity(g, cluster, s);
  }
  return false;
}

}  // namespace luf

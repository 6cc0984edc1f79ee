#include "luf/engine.hpp"

#include <algorithm>
#include <string>

namespace luf {

namespace {

Direction opposite(Direction dir) {
  switch (dir) {
    case Direction::N: return Direction::S;
    case Direction::S: return Direction::N;
    case Direction::W: return Direction::E;
    case Direction::E: return Direction::W;
    case Direction::D: return Direction::U;
    case Direction::U: return Direction::D;
    case Direction::C: return Direction::C;
  }
  return Direction::C;
}

NodeId neighbour_along(const CodeGraph& g, NodeId v, Direction dir) {
  for (const Incidence& inc : g.incident(v)) {
    if (inc.dir == dir) return inc.neighbour;
  }
  throw std::logic_error("pointer of node " + std::to_string(v) + " leaves the graph");
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Growing: return "growing";
    case Stage::Merging: return "merging";
    case Stage::Presyncing: return "presyncing";
    case Stage::Syncing: return "syncing";
    case Stage::Burning: return "burning";
    case Stage::Peeling: return "peeling";
    case Stage::Done: return "done";
  }
  return "?";
}

Stage next_stage(Stage stage) {
  switch (stage) {
    case Stage::Growing: return Stage::Merging;
    case Stage::Merging: return Stage::Presyncing;
    case Stage::Presyncing: return Stage::Syncing;
    case Stage::Syncing: return Stage::Burning;
    case Stage::Burning: return Stage::Peeling;
    case Stage::Peeling: return Stage::Done;
    case Stage::Done: return Stage::Done;
  }
  return Stage::Done;
}

bool is_arbitrary(Stage stage) {
  return stage == Stage::Merging || stage == Stage::Syncing || stage == Stage::Peeling;
}

void PendingStep::begin(const Snapshot& committed) {
  nodes_ = committed.nodes;
  if (anyon_in_.size() != committed.nodes.size()) {
    anyon_in_.assign(committed.nodes.size(), 0);
    defect_flip_.assign(committed.nodes.size(), 0);
    touched_nodes_.clear();
  }
  if (growth_.size() != committed.support.size()) {
    growth_.assign(committed.support.size(), 0);
    cleared_.assign(committed.support.size(), 0);
    touched_edges_.clear();
  }
  correction_.clear();
}

void PendingStep::relay_anyon(NodeId to) {
  anyon_in_[to] ^= 1;
  touched_nodes_.push_back(to);
}

void PendingStep::flip_defect(NodeId to) {
  defect_flip_[to] ^= 1;
  touched_nodes_.push_back(to);
}

void PendingStep::grow_half(EdgeId e) {
  ++growth_[e];
  touched_edges_.push_back(e);
}

void PendingStep::clear_support(EdgeId e) {
  cleared_[e] = 1;
  touched_edges_.push_back(e);
}

int PendingStep::commit(Snapshot& state, std::vector<EdgeId>& correction) {
  for (NodeId v : touched_nodes_) {
    nodes_[v].anyon = nodes_[v].anyon != (anyon_in_[v] != 0);
    nodes_[v].defect = nodes_[v].defect != (defect_flip_[v] != 0);
    anyon_in_[v] = 0;
    defect_flip_[v] = 0;
  }
  touched_nodes_.clear();
  int changes = 0;
  for (EdgeId e : touched_edges_) {
    if (growth_[e] == 0 && cleared_[e] == 0) continue;  // already applied
    const std::uint8_t before = state.support[e];
    const std::uint8_t after =
        cleared_[e] ? 0 : static_cast<std::uint8_t>(std::min(2, before + growth_[e]));
    if (after != before) ++changes;
    state.support[e] = after;
    growth_[e] = 0;
    cleared_[e] = 0;
  }
  touched_edges_.clear();
  state.nodes.swap(nodes_);
  correction.insert(correction.end(), correction_.begin(), correction_.end());
  return changes;
}

EngineState init_state(const CodeGraph& g, const Syndrome& s) {
  EngineState st;
  st.graph = &g;
  st.snap.nodes.resize(g.num_nodes());
  st.snap.support.assign(g.num_edges(), 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) st.snap.nodes[v].cid = v;
  for (NodeId v : s.defects) {
    if (v >= g.num_nodes() || g.is_boundary(v)) {
      throw std::invalid_argument("defect " + std::to_string(v) + " is not a bulk node");
    }
    NodeState& n = st.snap.nodes[v];
    n.defect = n.active = n.anyon = true;
  }
  return st;
}

std::vector<NodeId> accessibles(const CodeGraph& g, const Snapshot& snap, NodeId v) {
  std::vector<NodeId> out;
  for (const Incidence& inc : g.incident(v)) {
    if (snap.fully_grown(inc.edge)) out.push_back(inc.neighbour);
  }
  return out;
}

Stage step_controller(Stage stage, bool any_busy, bool any_active) {
  if (stage == Stage::Done || any_busy) return stage;
  if (stage == Stage::Syncing) return any_active ? Stage::Growing : Stage::Burning;
  return next_stage(stage);
}

void proc_growing(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out) {
  if (!cur.nodes[v].active) return;
  for (const Incidence& inc : g.incident(v)) {
    if (!cur.fully_grown(inc.edge)) out.grow_half(inc.edge);
  }
}

void proc_merging(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out) {
  const NodeState& self = cur.nodes[v];
  NodeState& next = out.node(v);
  next.busy = false;
  if (!g.is_boundary(v) && !cur.is_root(v) && self.anyon) {
    next.busy = true;
    next.anyon = false;
    out.relay_anyon(neighbour_along(g, v, self.pointer));
  }
  // Incidences are sorted by neighbour ID, so ties on CID go to the lowest-ID neighbour.
  NodeId cid = self.cid;
  for (const Incidence& inc : g.incident(v)) {
    if (!cur.fully_grown(inc.edge)) continue;
    const NodeId ucid = cur.nodes[inc.neighbour].cid;
    if (ucid < cid) {
      cid = ucid;
      next.busy = true;
      next.pointer = inc.dir;
      next.cid = ucid;
    }
  }
}

void proc_presyncing(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out) {
  out.node(v).active = !g.is_boundary(v) && cur.is_root(v) && cur.nodes[v].anyon;
}

void proc_syncing(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out) {
  const bool active = cur.nodes[v].active;
  bool sees_active = false;
  for (const Incidence& inc : g.incident(v)) {
    if (cur.fully_grown(inc.edge) && cur.nodes[inc.neighbour].active) {
      sees_active = true;
      break;
    }
  }
  NodeState& next = out.node(v);
  next.busy = !active && sees_active;
  next.active = active || next.busy;
}

void proc_burning(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out) {
  for (const Incidence& inc : g.incident(v)) {
    if (inc.neighbour < v || !cur.fully_grown(inc.edge)) continue;  // owned edges only
    const bool used = cur.nodes[v].pointer == inc.dir ||
                      cur.nodes[inc.neighbour].pointer == opposite(inc.dir);
    if (!used) out.clear_support(inc.edge);
  }
}

void proc_peeling(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out) {
  NodeState& next = out.node(v);
  next.busy = false;
  if (cur.is_root(v)) return;
  const Incidence* leaf_edge = nullptr;
  int count = 0;
  for (const Incidence& inc : g.incident(v)) {
    if (cur.fully_grown(inc.edge)) {
      leaf_edge = &inc;
      ++count;
    }
  }
  if (count != 1) return;
  next.busy = true;
  out.clear_support(leaf_edge->edge);
  if (cur.nodes[v].defect) {
    next.defect = false;
    out.add_to_correction(leaf_edge->edge);
    if (!g.is_boundary(leaf_edge->neighbour)) out.flip_defect(leaf_edge->neighbour);  // boundaries absorb
  }
}

void run_procedure(Stage stage, const CodeGraph& g, const Snapshot& cur, NodeId v,
                   PendingStep& out) {
  switch (stage) {
    case Stage::Growing: proc_growing(g, cur, v, out); break;
    case Stage::Merging: proc_merging(g, cur, v, out); break;
    case Stage::Presyncing: proc_presyncing(g, cur, v, out); break;
    case Stage::Syncing: proc_syncing(g, cur, v, out); break;
    case Stage::Burning: proc_burning(g, cur, v, out); break;
    case Stage::Peeling: proc_peeling(g, cur, v, out); break;
    case Stage::Done: break;
  }
}

namespace {

struct Counts {
  int busy = 0;
  int active = 0;
  int anyon = 0;
};

Counts count_flags(const Snapshot& snap) {
  Counts c;
  for (const NodeState& n : snap.nodes) {
    c.busy += n.busy;
    c.active += n.active;
    c.anyon += n.anyon;
  }
  return c;
}

bool any_active(const Snapshot& snap) {
  return std::any_of(snap.nodes.begin(), snap.nodes.end(),
                     [](const NodeState& n) { return n.active; });
}

}  // namespace

int step_aluf(EngineState& st, PendingStep& scratch) {
  const CodeGraph& g = *st.graph;
  const Stage stage = st.stage;
  if (stage == Stage::Done) return 0;
  if (stage == Stage::Growing && any_active(st.snap)) ++st.growth_rounds;

  scratch.begin(st.snap);
  for (NodeId v = 0; v < g.num_nodes(); ++v) run_procedure(stage, g, st.snap, v, scratch);
  const int changes = scratch.commit(st.snap, st.correction);

  ++st.stage_timesteps[static_cast<std::size_t>(stage)];
  ++st.timestep;
  const Counts c = count_flags(st.snap);
  st.stage = step_controller(stage, c.busy > 0, c.active > 0);
  if (st.stage == Stage::Burning && st.validation_timesteps < 0) {
    st.validation_timesteps = st.timestep;
  }
  return changes;
}

DecodeResult run_aluf(EngineState& st, const DecodeOptions& opts, const AlufObserver& observer) {
  const CodeGraph& g = *st.graph;
  const std::size_t cap = opts.max_timesteps ? opts.max_timesteps : 64 * g.num_nodes();
  PendingStep scratch;
  DecodeResult result;
  while (st.stage != Stage::Done) {
    if (static_cast<std::size_t>(st.timestep) >= cap) {
      throw EngineTimeout("almost-local engine exceeded " + std::to_string(cap) + " timesteps");
    }
    const Stage stage = st.stage;
    const int t = st.timestep;
    const int changes = step_aluf(st, scratch);
    if (opts.trace) {
      const Counts c = count_flags(st.snap);
      TraceRecord rec;
      rec.t = t;
      rec.stage = stage;
      rec.busy_count = c.busy;
      rec.active_count = c.active;
      rec.anyon_count = c.anyon;
      rec.support_changes = changes;
      result.trace.push_back(rec);
    }
    if (observer) observer(st);
  }
  result.correction = st.correction;
  std::sort(result.correction.begin(), result.correction.end());
  result.validation_timesteps = st.validation_timesteps;
  result.total_timesteps = st.timestep;
  result.growth_rounds = st.growth_rounds;
  result.stage_timesteps = st.stage_timesteps;
  return result;
}

DecodeResult run_decode_aluf(const CodeGraph& g, const Syndrome& s, const DecodeOptions& opts) {
  EngineState st = init_state(g, s);
  return run_aluf(st, opts);
}

}  // namespace luf

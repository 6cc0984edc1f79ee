#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "luf/code_graph.hpp"
#include "luf/noise_model.hpp"

namespace luf {

enum class Stage : std::uint8_t { Growing, Merging, Presyncing, Syncing, Burning, Peeling, Done };
inline constexpr std::size_t kStageCount = 7;

std::string_view to_string(Stage stage);
/// Successor in the flowchart order; Syncing's branch is taken by the controller, Done is absorbing.
Stage next_stage(Stage stage);
/// Merging, Syncing and Peeling last an arbitrary number of timesteps.
bool is_arbitrary(Stage stage);

struct NodeState {
  bool defect = false;
  bool active = false;
  bool anyon = false;
  bool busy = false;
  Direction pointer = Direction::C;
  NodeId cid = 0;
};

/// The committed state every component reads during a timestep.
struct Snapshot {
  std::vector<NodeState> nodes;
  std::vector<std::uint8_t> support;  // growth value in halves: 0, 1 or 2

  bool fully_grown(EdgeId e) const { return support[e] == 2; }
  double support_value(EdgeId e) const { return support[e] * 0.5; }
  bool is_root(NodeId v) const { return nodes[v].cid == v; }
};

/// Writes produced by node procedures during one timestep. Nothing is visible until
/// commit(); simultaneous anyon deliveries and defect flips combine by parity.
class PendingStep {
 public:
  void begin(const Snapshot& committed);
  NodeState& node(NodeId v) { return nodes_[v]; }
  void relay_anyon(NodeId to);
  void flip_defect(NodeId to);
  void grow_half(EdgeId e);
  void clear_support(EdgeId e);
  void add_to_correction(EdgeId e) { correction_.push_back(e); }
  /// Publishes the writes into `state`; returns the number of edges whose support changed.
  int commit(Snapshot& state, std::vector<EdgeId>& correction);

 private:
  std::vector<NodeState> nodes_;
  std::vector<std::uint8_t> anyon_in_;
  std::vector<std::uint8_t> defect_flip_;
  std::vector<NodeId> touched_nodes_;
  std::vector<std::uint8_t> growth_;
  std::vector<std::uint8_t> cleared_;
  std::vector<EdgeId> touched_edges_;
  std::vector<EdgeId> correction_;
};

struct TraceRecord {
  int t = 0;
  Stage stage = Stage::Growing;  // controller stage during this timestep
  int busy_count = 0;
  int active_count = 0;
  int anyon_count = 0;
  int support_changes = 0;
  // Strictly local engine only.
  int controller_countdown = -1;
  bool busy_signal_arrival = false;
  int stage_front_position = -1;
  int fixed_executions = 0;
};

/// Controller-side view of one arbitrary-duration stage in the strictly local engine.
struct StageWindow {
  Stage stage = Stage::Merging;
  int start = 0;  // first timestep the controller spends in the stage
  int end = 0;    // timestep at which it leaves
  std::vector<int> busy_arrivals;  // timesteps at which a busy_signal reached the controller
};

struct DecodeResult {
  std::vector<EdgeId> correction;  // sorted
  int validation_timesteps = 0;
  int total_timesteps = 0;
  int growth_rounds = 0;
  std::array<int, kStageCount> stage_timesteps{};
  std::vector<TraceRecord> trace;
  std::vector<StageWindow> windows;
};

class EngineTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Almost-local engine state: node/edge attributes plus the controller.
struct EngineState {
  const CodeGraph* graph = nullptr;
  Snapshot snap;
  Stage stage = Stage::Growing;
  int timestep = 0;
  std::array<int, kStageCount> stage_timesteps{};
  int growth_rounds = 0;
  int validation_timesteps = -1;  // set when the controller first enters Burning
  std::vector<EdgeId> correction;
};

/// Throws std::invalid_argument if a defect is not a bulk node of g.
EngineState init_state(const CodeGraph& g, const Syndrome& s);

/// Neighbours along fully grown edges.
std::vector<NodeId> accessibles(const CodeGraph& g, const Snapshot& snap, NodeId v);

/// Almost-local controller transition given the busy/active bits of the nodes.
Stage step_controller(Stage stage, bool any_busy, bool any_active);

// Node procedures. Each reads `cur` only and writes through `out`.
void proc_growing(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out);
void proc_merging(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out);
void proc_presyncing(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out);
void proc_syncing(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out);
void proc_burning(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out);
void proc_peeling(const CodeGraph& g, const Snapshot& cur, NodeId v, PendingStep& out);
/// Dispatches on `stage`; Done is a no-op.
void run_procedure(Stage stage, const CodeGraph& g, const Snapshot& cur, NodeId v,
                   PendingStep& out);

struct DecodeOptions {
  bool trace = false;
  /// 0 selects the engine default (64·N, plus 16·controller_span for the strictly local engine).
  std::size_t max_timesteps = 0;
};

using AlufObserver = std::function<void(const EngineState&)>;

/// Executes one lockstep timestep: all nodes run the current stage's procedure, writes
/// commit, then the controller inspects the just-committed busy/active bits.
/// Returns the number of edges whose support changed.
int step_aluf(EngineState& st, PendingStep& scratch);

/// Runs until the controller reaches Done. Throws EngineTimeout past the timestep cap.
DecodeResult run_aluf(EngineState& st, const DecodeOptions& opts = {},
                      const AlufObserver& observer = {});
DecodeResult run_decode_aluf(const CodeGraph& g, const Syndrome& s,
                             const DecodeOptions& opts = {});

}  // namespace luf

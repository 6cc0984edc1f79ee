#pragma once

#include <functional>
#include <vector>

#include "luf/engine.hpp"

namespace luf {

/// Controller of the strictly local engine. It is wired only to node 0.
struct SlufController {
  Stage stage = Stage::Growing;
  int countdown = 0;
  bool busy_signal = false;    // received this timestep
  bool active_signal = false;  // received at some point during the current Syncing stage
  int span = 0;
};

/// Per-node staging/signalling registers layered on NodeState.
struct SlufNode {
  Stage stage = Stage::Growing;
  int countdown = 0;
  bool busy_signal = false;    // outgoing toward the signalee
  bool active_signal = false;  // outgoing toward the signalee
};

struct SlufState {
  EngineState base;  // base.stage mirrors controller.stage
  SlufController controller;
  std::vector<SlufNode> nodes;
};

/// Starts every node and the controller in `base.stage` with the countdowns that stage
/// would have on entry (used to launch hand-built states mid-cycle).
SlufState make_sluf_state(EngineState base);
SlufState init_sluf_state(const CodeGraph& g, const Syndrome& s);

/// One controller timestep. `busy_signal` must already hold the bit received this timestep;
/// `received_active` is the active bit received this timestep.
void advance_local_controller(SlufController& c, bool received_active);

/// Outcome of one node's timestep, for instrumentation.
struct NodeAdvance {
  bool ran_procedure = false;
  bool fixed = false;  // the procedure belonged to a fixed-duration stage
};

/// One node timestep: AdvanceArbitrary for Merging/Syncing/Peeling, AdvanceFixed otherwise.
/// Reads the committed state in `cur`/`cur_nodes`, writes into `out`/`next`.
NodeAdvance advance_local_node(const CodeGraph& g, const Snapshot& cur,
                               const std::vector<SlufNode>& cur_nodes, Stage controller_stage,
                               NodeId v, PendingStep& out, SlufNode& next);

using SlufObserver = std::function<void(const SlufState&)>;

/// Runs the strictly local engine until the controller reaches Done and every node has
/// been staged into Done. Throws EngineTimeout past the timestep cap.
DecodeResult run_sluf(SlufState& st, const DecodeOptions& opts = {},
                      const SlufObserver& observer = {});
DecodeResult run_decode_sluf(const CodeGraph& g, const Syndrome& s,
                             const DecodeOptions& opts = {});

struct DopplerViolation {
  int window_start = 0;
  int arrival = 0;  // timestep of the unpreceded busy_signal
};

struct DopplerReport {
  int windows_checked = 0;
  int arrivals_checked = 0;
  std::vector<DopplerViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Every busy_signal reaching the controller more than `controller_span` timesteps into a
/// Merging stage must follow another one at most 2 timesteps earlier.
DopplerReport doppler_monitor(const std::vector<StageWindow>& windows, int controller_span);

/// Expected validation runtime for r growth rounds: span · max{3, 4r − 1}.
long long predict_peak(long long span, int growth_rounds);

}  // namespace luf

#include "luf/sluf_engine.hpp"

#include <algorithm>
#include <string>

namespace luf {

namespace {

int entry_countdown(Stage stage, int span) {
  if (stage == Stage::Merging || stage == Stage::Peeling) return span + 1;
  return span;
}

}  // namespace

SlufState make_sluf_state(EngineState base) {
  SlufState st;
  const CodeGraph& g = *base.graph;
  st.controller.span = g.controller_span();
  st.controller.stage = base.stage;
  st.controller.countdown = is_arbitrary(base.stage) ? entry_countdown(base.stage, g.controller_span()) : 0;
  st.nodes.assign(g.num_nodes(), SlufNode{base.stage, 0, false, false});
  st.base = std::move(base);
  return st;
}

SlufState init_sluf_state(const CodeGraph& g, const Syndrome& s) {
  return make_sluf_state(init_state(g, s));
}

void advance_local_controller(SlufController& c, bool received_active) {
  if (c.stage == Stage::Done) return;
  if (c.stage == Stage::Syncing && received_active) c.active_signal = true;
  if (c.countdown == 0) {
    if (c.stage == Stage::Syncing) {
      c.stage = c.active_signal ? Stage::Growing : Stage::Burning;
      c.active_signal = false;
    } else {
      c.stage = next_stage(c.stage);
    }
    c.countdown = entry_countdown(c.stage, c.span);
  } else if (c.busy_signal && (c.countdown == 1 || c.countdown == 2)) {
    c.countdown = 2;  // only reachable during arbitrary-duration stages
  } else {
    --c.countdown;
  }
}

NodeAdvance advance_local_node(const CodeGraph& g, const Snapshot& cur,
                               const std::vector<SlufNode>& cur_nodes, Stage controller_stage,
                               NodeId v, PendingStep& out, SlufNode& next) {
  const SlufNode& me = cur_nodes[v];
  bool busy_in = false;
  bool active_in = false;
  for (NodeId c : g.signalers(v)) {
    busy_in = busy_in || cur_nodes[c].busy_signal;
    active_in = active_in || cur_nodes[c].active_signal;
  }
  // Signals relay one link per timestep in every stage.
  next.busy_signal = busy_in;
  next.active_signal = active_in;

  NodeAdvance adv;
  if (is_arbitrary(me.stage)) {
    const NodeId up = g.signalee(v);
    const Stage signalee_stage = up == kController ? controller_stage : cur_nodes[up].stage;
    if (me.stage == signalee_stage) {
      run_procedure(me.stage, g, cur, v, out);
      next.busy_signal = busy_in || out.node(v).busy;
      adv.ran_procedure = true;
    } else {
      next.stage = signalee_stage;  // staging
      next.countdown = g.span(v);
    }
  } else if (me.countdown == 0) {
    if (me.stage != Stage::Done) {
      run_procedure(me.stage, g, cur, v, out);
      if (me.stage == Stage::Presyncing) {
        next.active_signal = active_in || out.node(v).active;
      }
      adv.ran_procedure = true;
      adv.fixed = true;
    }
    next.stage = next_stage(me.stage);
  } else {
    next.countdown = me.countdown - 1;
  }
  return adv;
}

DecodeResult run_sluf(SlufState& st, const DecodeOptions& opts, const SlufObserver& observer) {
  const CodeGraph& g = *st.base.graph;
  const std::size_t n = g.num_nodes();
  const std::size_t cap =
      opts.max_timesteps ? opts.max_timesteps
                         : 64 * n + 16 * static_cast<std::size_t>(g.controller_span());
  PendingStep scratch;
  std::vector<SlufNode> next_nodes;
  DecodeResult result;
  int done_at = -1;
  if (is_arbitrary(st.controller.stage)) {
    result.windows.push_back({st.controller.stage, st.base.timestep, -1, {}});
  }

  const auto all_done = [&] {
    return std::all_of(st.nodes.begin(), st.nodes.end(),
                       [](const SlufNode& x) { return x.stage == Stage::Done; });
  };

  while (st.controller.stage != Stage::Done || !all_done()) {
    if (static_cast<std::size_t>(st.base.timestep) >= cap) {
      throw EngineTimeout("strictly local engine exceeded " + std::to_string(cap) +
                          " timesteps");
    }
    const int t = st.base.timestep;
    const Stage ctrl_stage = st.controller.stage;
    const bool received_busy = st.nodes[0].busy_signal;
    const bool received_active = st.nodes[0].active_signal;

    scratch.begin(st.base.snap);
    next_nodes = st.nodes;
    int fixed_executions = 0;
    bool grew_active = false;
    for (NodeId v = 0; v < n; ++v) {
      const NodeAdvance adv =
          advance_local_node(g, st.base.snap, st.nodes, ctrl_stage, v, scratch, next_nodes[v]);
      if (adv.fixed) {
        ++fixed_executions;
        if (st.nodes[v].stage == Stage::Growing && st.base.snap.nodes[v].active) {
          grew_active = true;
        }
      }
    }
    const int changes = scratch.commit(st.base.snap, st.base.correction);
    st.nodes.swap(next_nodes);
    if (grew_active) ++st.base.growth_rounds;

    if (ctrl_stage != Stage::Done) {
      ++st.base.stage_timesteps[static_cast<std::size_t>(ctrl_stage)];
      st.controller.busy_signal = received_busy;
      if (is_arbitrary(ctrl_stage) && received_busy && !result.windows.empty()) {
        result.windows.back().busy_arrivals.push_back(t);
      }
      advance_local_controller(st.controller, received_active);
    }
    ++st.base.timestep;
    st.base.stage = st.controller.stage;

    if (st.controller.stage != ctrl_stage) {
      if (is_arbitrary(ctrl_stage) && !result.windows.empty()) result.windows.back().end = t;
      if (is_arbitrary(st.controller.stage)) {
        result.windows.push_back({st.controller.stage, st.base.timestep, -1, {}});
      }
      if (st.controller.stage == Stage::Burning && st.base.validation_timesteps < 0) {
        st.base.validation_timesteps = st.base.timestep;
      }
      if (st.controller.stage == Stage::Done) done_at = st.base.timestep;
    }

    if (opts.trace) {
      TraceRecord rec;
      rec.t = t;
      rec.stage = ctrl_stage;
      for (const NodeState& x : st.base.snap.nodes) {
        rec.busy_count += x.busy;
        rec.active_count += x.active;
        rec.anyon_count += x.anyon;
      }
      rec.support_changes = changes;
      rec.controller_countdown = st.controller.countdown;
      rec.busy_signal_arrival = received_busy;
      for (NodeId v = 0; v < n; ++v) {
        if (st.nodes[v].stage == st.controller.stage) {
          rec.stage_front_position = std::max(rec.stage_front_position, g.signal_distance(v));
        }
      }
      rec.fixed_executions = fixed_executions;
      result.trace.push_back(rec);
    }
    if (observer) observer(st);
  }

  result.correction = st.base.correction;
  std::sort(result.correction.begin(), result.correction.end());
  result.validation_timesteps = st.base.validation_timesteps;
  result.total_timesteps = done_at >= 0 ? done_at : st.base.timestep;
  result.growth_rounds = st.base.growth_rounds;
  result.stage_timesteps = st.base.stage_timesteps;
  return result;
}

DecodeResult run_decode_sluf(const CodeGraph& g, const Syndrome& s, const DecodeOptions& opts) {
  SlufState st = init_sluf_state(g, s);
  return run_sluf(st, opts);
}

DopplerReport doppler_monitor(const std::vector<StageWindow>& windows, int controller_span) {
  DopplerReport report;
  for (const StageWindow& w : windows) {
    if (w.stage != Stage::Merging) continue;
    ++report.windows_checked;
    for (std::size_t i = 0; i < w.busy_arrivals.size(); ++i) {
      const int a = w.busy_arrivals[i];
      if (a - w.start <= controller_span) continue;
      ++report.arrivals_checked;
      const bool preceded = i > 0 && a - w.busy_arrivals[i - 1] <= 2;
      if (!preceded) report.violations.push_back({w.start, a});
    }
  }
  return report;
}

long long predict_peak(long long span, int growth_rounds) {
  return span * std::max(3LL, 4LL * growth_rounds - 1);
}

}  // namespace luf

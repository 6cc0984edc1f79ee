#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "luf/code_graph.hpp"
#include "luf/engine.hpp"
#include "luf/noise_model.hpp"
#include "luf/verify.hpp"

namespace luf {

using json = nlohmann::ordered_json;

/// Debug dump: nodes with id/kind/coords/span/signalee, then the edge list.
json graph_to_json(const CodeGraph& g);

json error_to_json(const ErrorPattern& e);
ErrorPattern error_from_json(const json& j);
json syndrome_to_json(const Syndrome& s);
Syndrome syndrome_from_json(const json& j);

/// One trace line. SLUF-only fields appear when the record carries them.
json trace_to_json(const TraceRecord& rec);

json violation_to_json(const ViolationReport& report);
ViolationReport violation_from_json(const json& j);

}  // namespace luf

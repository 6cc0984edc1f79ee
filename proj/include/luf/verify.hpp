#pragma once

#include <string>
#include <vector>

#include "luf/code_graph.hpp"
#include "luf/engine.hpp"
#include "luf/noise_model.hpp"

namespace luf {

/// True iff syndrome_of(correction) equals s.
bool check_correction(const CodeGraph& g, const Syndrome& s, const std::vector<EdgeId>& correction);

enum class LeftoverKind { Cycle, SameBoundaryPath, OppositeBoundaryPath };
std::string_view to_string(LeftoverKind kind);

struct LeftoverComponent {
  std::vector<EdgeId> edges;
  LeftoverKind kind = LeftoverKind::Cycle;
};

/// The leftover error ⊕ correction split into boundary-to-boundary trails and cycles.
/// `violations` is non-empty when some bulk node meets the leftover an odd number of times,
/// which means the correction did not reproduce the syndrome.
struct LeftoverDecomposition {
  std::vector<LeftoverComponent> components;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  int count(LeftoverKind kind) const;
};

LeftoverDecomposition decompose_leftover(const CodeGraph& g, const ErrorPattern& e,
                                         const std::vector<EdgeId>& correction);

/// Odd number of West–East leftover paths.
bool is_logical_error(const LeftoverDecomposition& dec);

struct ClusterView {
  std::vector<NodeId> nodes;  // sorted
  std::vector<EdgeId> edges;  // fully grown edges inside the cluster, sorted
  NodeId root = 0;            // lowest ID
  int defect_count = 0;
  bool touches_boundary = false;

  /// Activity by defect parity and boundary contact.
  bool parity_active() const { return defect_count % 2 == 1 && !touches_boundary; }
};

/// Sequential reference for syndrome validation: every active cluster grows its incident
/// edges by half (an edge gains half per active endpoint), newly full edges merge clusters
/// in a disjoint-set forest, until no cluster is active.
struct SequentialUfRun {
  std::vector<ClusterView> clusters;  // final partition, ordered by root
  int growth_rounds = 0;
  /// Partition after initialisation and after each round (only if requested).
  std::vector<std::vector<ClusterView>> history;
};

SequentialUfRun run_sequential_uf(const CodeGraph& g, const Syndrome& s, bool record_history = false);
std::vector<ClusterView> sequential_uf_partition(const CodeGraph& g, const Syndrome& s);

/// Per-node cluster label (the root ID) of a partition.
std::vector<NodeId> partition_labels(const CodeGraph& g, const std::vector<ClusterView>& clusters);

enum class ActivityMethod { Auto, Enumerate, Gf2 };

/// Active iff no subset of the cluster's edges has syndrome S ∩ V_C. Auto enumerates up to
/// `enumeration_cap` edges and solves over GF(2) above that. Enumerate throws
/// std::invalid_argument beyond the cap.
bool brute_force_activity(const CodeGraph& g, const ClusterView& cluster, const Syndrome& s,
                          ActivityMethod method = ActivityMethod::Auto, int enumeration_cap = 20);

/// Structured, replayable failure description.
struct ViolationReport {
  std::uint64_t sample_seed = 0;
  std::string kind;
  std::string detail;
};

}  // namespace luf

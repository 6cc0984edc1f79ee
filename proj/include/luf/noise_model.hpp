#pragma once

#include <cstdint>
#include <vector>

#include "luf/code_graph.hpp"

namespace luf {

/// A set of flipped edges, kept sorted and duplicate-free.
struct ErrorPattern {
  std::vector<EdgeId> edges;
  friend bool operator==(const ErrorPattern&, const ErrorPattern&) = default;
};

/// A set of defects (bulk nodes only), kept sorted and duplicate-free.
struct Syndrome {
  std::vector<NodeId> defects;
  bool empty() const { return defects.empty(); }
  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

struct NoiseParams {
  double p = 0.0;  // horizontal edges
  double q = 0.0;  // vertical edges
  std::uint64_t seed = 0;
};

/// Stateless counter-based hash; uniform in [0, 1) for each distinct key triple.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Mixes two 64-bit values into one; used to derive per-experiment stream keys.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Flips each horizontal edge with probability p and each vertical edge with q.
/// The draw for edge e of sample k depends only on (seed, k, e).
/// Throws std::invalid_argument for probabilities outside [0, 1].
ErrorPattern sample_error(const CodeGraph& g, const NoiseParams& params,
                          std::uint64_t sample_index = 0);

/// Bulk nodes incident to an odd number of edges of `e`.
Syndrome syndrome_of(const CodeGraph& g, const std::vector<EdgeId>& edges);
inline Syndrome syndrome_of(const CodeGraph& g, const ErrorPattern& e) {
  return syndrome_of(g, e.edges);
}

/// Symmetric difference of two sorted ID lists.
template <typename Id>
std::vector<Id> symmetric_difference(const std::vector<Id>& a, const std::vector<Id>& b);

ErrorPattern make_error(std::vector<EdgeId> edges);
Syndrome make_syndrome(std::vector<NodeId> defects);

}  // namespace luf
